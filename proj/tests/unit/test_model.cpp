#include <Eigen/Eigenvalues>
#include <complex>
#include <random>

#include "doctest.h"
#include "omem/drift.hpp"
#include "omem/errors.hpp"
#include "omem/fixed_point.hpp"
#include "omem/params.hpp"
#include "test_helpers.hpp"

using namespace omem;
using omem::test::kTwoPi;

TEST_CASE("thermal occupation") {
    const double wm = kTwoPi * 10.69e6;

    SUBCASE("reference temperatures") {
        CHECK(thermal_occupation(1.7e-3, wm) == doctest::Approx(3.0).epsilon(0.07));
        // pinned after first evaluation; used by the 0.01 K storage curves
        CHECK(thermal_occupation(0.01, wm) == doctest::Approx(18.995967501207).epsilon(1e-9));
    }
    SUBCASE("ground-state limit") {
        CHECK(thermal_occupation(1e-9, wm) == 0.0);
    }
    SUBCASE("strictly increasing in T") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> temp(1e-4, 10.0);
        for (int i = 0; i < 200; ++i) {
            const double t1 = temp(rng);
            const double t2 = t1 * (1.0 + 1e-3);
            CHECK(thermal_occupation(t2, wm) > thermal_occupation(t1, wm));
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(thermal_occupation(0.0, wm), config_error);
        CHECK_THROWS_AS(thermal_occupation(-1.0, wm), config_error);
        CHECK_THROWS_AS(thermal_occupation(1.0, 0.0), config_error);
    }
}

TEST_CASE("params invariants") {
    PhysicalParams p = test::teufel_params();
    CHECK_NOTHROW(p.validate());
    CHECK(p.resolved_sideband());
    CHECK(p.coupling() == doctest::Approx(0.05 * p.omega_m));

    PhysicalParams bad = p;
    bad.omega_m = 0.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = p;
    bad.n_mech = -1.0;
    CHECK_THROWS_AS(bad.validate(), config_error);

    CHECK_THROWS_AS(PhysicalParams::from_coupling(1.0, 0.1, 0.0, 0.0, 0.5, 0, 0),
                    config_error);

    PhysicalParams scaled = p.scaled();
    CHECK(scaled.omega_m == 1.0);
    CHECK(scaled.kappa == doctest::Approx(p.kappa / p.omega_m));
    CHECK(scaled.alpha_s == p.alpha_s);  // dimensionless, untouched
}

TEST_CASE("drift matrices") {
    std::mt19937_64 rng(11);
    PhysicalParams p = test::random_scaled_params(rng);

    SUBCASE("structure of the write drift") {
        const Mat5 q = drift_matrix(p, CouplingPhase::Write);
        CHECK(q(kPsi, kX1) == 0.0);
        CHECK(q(kPsi, kP2) == 0.0);
        CHECK(q(kPsi, kPsi) == -p.noise.cutoff);
        CHECK(q(kP2, kPsi) == -p.alpha_s);
        CHECK(q(kX1, kP1) == p.omega_m);
        CHECK(q(kX2, kX2) == -p.kappa / 2);
    }
    SUBCASE("store phase is block diagonal in mech/opt/psi") {
        const Mat5 q = drift_matrix(p, CouplingPhase::Store);
        CHECK(q(kX1, kP2) == 0.0);
        CHECK(q(kP1, kX2) == 0.0);
        CHECK(q(kX2, kP1) == 0.0);
        CHECK(q(kP2, kX1) == 0.0);
        CHECK(q(kP2, kPsi) == 0.0);
    }
    SUBCASE("read equals write with G negated") {
        const Mat5 w = drift_matrix(p, CouplingPhase::Write);
        const Mat5 r = drift_matrix(p, CouplingPhase::Read);
        Mat5 diff = w - r;
        const double g = p.coupling();
        CHECK(diff(kX1, kP2) == doctest::Approx(-2 * g));
        CHECK(diff(kP1, kX2) == doctest::Approx(2 * g));
        CHECK(diff(kX2, kP1) == doctest::Approx(-2 * g));
        CHECK(diff(kP2, kX1) == doctest::Approx(2 * g));
        diff(kX1, kP2) = diff(kP1, kX2) = diff(kX2, kP1) = diff(kP2, kX1) = 0.0;
        CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("pure rotation eigenvalues with zero damping and G") {
        PhysicalParams lossless = p;
        lossless.alpha_s = 0.0;
        lossless.gamma = lossless.kappa = 0.0;
        lossless.noise.cutoff = 0.0;
        const Mat5 q = drift_matrix(lossless, CouplingPhase::Write);
        Eigen::EigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(q)};
        auto ev = es.eigenvalues();
        std::vector<double> imag(5);
        for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(ev(i).real()) < 1e-12);
            imag[static_cast<size_t>(i)] = ev(i).imag();
        }
        std::sort(imag.begin(), imag.end());
        CHECK(imag[0] == doctest::Approx(-p.omega_m));
        CHECK(imag[1] == doctest::Approx(-p.omega_m));
        CHECK(std::abs(imag[2]) < 1e-12);
        CHECK(imag[3] == doctest::Approx(p.omega_m));
        CHECK(imag[4] == doctest::Approx(p.omega_m));
    }
    SUBCASE("mean drift is the top-left block, every phase") {
        for (auto phase :
             {CouplingPhase::Write, CouplingPhase::Store, CouplingPhase::Read}) {
            const Mat4 m = drift_matrix_mean(p, phase);
            const Mat5 q = drift_matrix(p, phase);
            CHECK((m - q.topLeftCorner<4, 4>()).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("mean drift trace and antisymmetric part") {
        const Mat4 m = drift_matrix_mean(p, CouplingPhase::Write);
        CHECK(m.trace() == doctest::Approx(-(p.gamma + p.kappa)));
        const Mat4 anti = (m - m.transpose()) / 2.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double v = std::abs(anti(i, j));
                const bool ok = v < 1e-15 ||
                                std::abs(v - p.omega_m) < 1e-12 * p.omega_m ||
                                std::abs(v - p.coupling()) < 1e-12;
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("diffusion matrix") {
    std::mt19937_64 rng(13);

    SUBCASE("colored, zero occupancies") {
        PhysicalParams p = test::random_scaled_params(rng);
        p.n_mech = p.n_cav = 0.0;
        const Mat5 n = diffusion_matrix(p);
        CHECK(n(kX1, kX1) == doctest::Approx(p.gamma / 4));
        CHECK(n(kX2, kX2) == doctest::Approx(p.kappa / 4));
        CHECK(n(kPsi, kPsi) ==
              doctest::Approx(2 * p.noise.cutoff * p.noise.cutoff * p.noise.linewidth));
    }
    SUBCASE("zero linewidth kills the psi entry") {
        PhysicalParams p = test::random_scaled_params(rng);
        p.noise.linewidth = 0.0;
        CHECK(diffusion_matrix(p)(kPsi, kPsi) == 0.0);
    }
    SUBCASE("white-exact folds the noise into p2") {
        PhysicalParams p = test::random_scaled_params(rng);
        p.noise.mode = NoiseMode::WhiteExact;
        p.noise.cutoff = 0.0;
        const Mat5 n = diffusion_matrix(p);
        CHECK(n(kPsi, kPsi) == 0.0);
        CHECK(n(kP2, kP2) == doctest::Approx(p.kappa * (1 + 2 * p.n_cav) / 4 +
                                             2 * p.noise.linewidth * p.alpha_s * p.alpha_s));
        p.noise.cutoff = 0.1;
        CHECK_THROWS_AS(diffusion_matrix(p), config_error);
    }
    SUBCASE("diagonal and nonnegative for random params") {
        for (int i = 0; i < 50; ++i) {
            PhysicalParams p = test::random_scaled_params(rng);
            const Mat5 n = diffusion_matrix(p);
            CHECK((n - Mat5(n.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
            CHECK(n.diagonal().minCoeff() >= 0.0);
        }
    }
    SUBCASE("input-correlator symmetrization reproduces the diffusion matrix") {
        // Independent route: build the complex one-time correlator matrix D0
        // of the input noises, collapse the delta against the half-open
        // integral (factor 1/2), and symmetrize. The imaginary off-diagonal
        // parts must cancel exactly.
        for (int i = 0; i < 20; ++i) {
            PhysicalParams p = test::random_scaled_params(rng);
            using CMat5 = Eigen::Matrix<std::complex<double>, 5, 5>;
            const std::complex<double> im(0.0, 1.0);
            const double gbar = p.gamma * (1 + 2 * p.n_mech);
            const double kbar = p.kappa * (1 + 2 * p.n_cav);
            CMat5 d0 = CMat5::Zero();
            d0(kX1, kX1) = d0(kP1, kP1) = gbar / 4;
            d0(kX1, kP1) = im * (p.gamma / 4);
            d0(kP1, kX1) = -im * (p.gamma / 4);
            d0(kX2, kX2) = d0(kP2, kP2) = kbar / 4;
            d0(kX2, kP2) = im * (p.kappa / 4);
            d0(kP2, kX2) = -im * (p.kappa / 4);
            d0(kPsi, kPsi) = 8.0 * p.noise.cutoff * p.noise.cutoff * p.noise.linewidth / 4.0;

            const CMat5 a = 0.5 * (d0 + d0.transpose());
            const CMat5 sym = 0.5 * (a + a.transpose());
            CHECK(sym.imag().cwiseAbs().maxCoeff() < 1e-18);
            const Mat5 n = diffusion_matrix(p);
            CHECK((sym.real() - n).cwiseAbs().maxCoeff() < 1e-15 * n.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("rotation generator") {
    const double wm = 3.7;
    const Mat5 qr = rotation_generator(wm);

    SUBCASE("antisymmetric, psi row and column zero") {
        CHECK((qr + qr.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(qr.row(kPsi).cwiseAbs().maxCoeff() == 0.0);
        CHECK(qr.col(kPsi).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("full period is the identity on the physical block") {
        const Eigen::MatrixXd r = expm(Eigen::MatrixXd(-qr), kTwoPi / wm);
        CHECK((r.topLeftCorner(4, 4) - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("orthogonal on the physical block, preserves norms") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        for (int i = 0; i < 20; ++i) {
            const double t = uni(rng) + 2.5;
            const Eigen::MatrixXd r = expm(Eigen::MatrixXd(-qr), t);
            Vec4 v;
            v << uni(rng), uni(rng), uni(rng), uni(rng);
            const Vec4 rv = r.topLeftCorner(4, 4) * v;
            CHECK(rv.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
        }
    }
}

TEST_CASE("full (non-RWA) drift") {
    std::mt19937_64 rng(19);
    PhysicalParams p = test::random_scaled_params(rng);
    const double delta = 1.3;

    SUBCASE("G = 0 eigenvalues are the bare damped rotations") {
        PhysicalParams q = p;
        q.alpha_s = 0.0;
        const Mat4 m = drift_matrix_full(q, delta);
        Eigen::EigenSolver<Mat4> es(m);
        std::vector<std::complex<double>> ev(4);
        for (int i = 0; i < 4; ++i) ev[static_cast<size_t>(i)] = es.eigenvalues()(i);
        const auto has = [&](std::complex<double> want) {
            for (const auto& e : ev) {
                if (std::abs(e - want) < 1e-10) return true;
            }
            return false;
        };
        CHECK(has({-q.gamma / 2, q.omega_m}));
        CHECK(has({-q.gamma / 2, -q.omega_m}));
        CHECK(has({-q.kappa / 2, delta}));
        CHECK(has({-q.kappa / 2, -delta}));
        // damped and uncoupled: Hurwitz
        CHECK(es.eigenvalues().real().maxCoeff() < 0.0);
    }
    SUBCASE("paper presets are Hurwitz at the operating point") {
        for (const PhysicalParams& preset :
             {test::teufel_params(), test::groblacher_params()}) {
            const Mat4 m = drift_matrix_full(preset, preset.omega_m);
            Eigen::EigenSolver<Mat4> es(m);
            CHECK(es.eigenvalues().real().maxCoeff() < 0.0);
        }
    }
}

TEST_CASE("fixed points") {
    PhysicalParams base;
    base.omega_m = 1.0;
    base.kappa = 0.1;
    base.gamma = 1e-3;
    base.g0 = 1e-3;

    SUBCASE("no drive: unique trivial stable root") {
        const auto roots = fixed_points(base, 0.0, 1.0);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0].intensity == 0.0);
        CHECK(std::abs(roots[0].beta) == 0.0);
        CHECK(roots[0].stable);
        CHECK(roots[0].selected);
    }
    SUBCASE("linear cavity closed form at g0 = 0") {
        PhysicalParams lin = base;
        lin.g0 = 0.0;
        const double el = 3.0, d0 = 0.7;
        const auto roots = fixed_points(lin, el, d0);
        REQUIRE(roots.size() == 1);
        const double expect = el / std::sqrt(d0 * d0 + lin.kappa * lin.kappa / 4);
        CHECK(std::abs(roots[0].alpha) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(std::abs(roots[0].beta) == 0.0);
    }
    SUBCASE("residuals below 1e-10 for random drives") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            PhysicalParams p = base;
            p.g0 = 1e-4 * std::pow(10.0, uni(rng));
            const double el = 50.0 * uni(rng);
            const double d0 = 3.0 * uni(rng);
            for (const auto& fp : fixed_points(p, el, d0)) {
                CHECK(fixed_point_residual(p, el, d0, fp) <= 1e-10);
            }
        }
    }
    SUBCASE("bistable regime found by discriminant scan: 2 stable + 1 unstable") {
        // Oracle: the cubic's discriminant, computed from raw coefficients,
        // decides how many real roots exist; no root solver involved.
        const double d0 = 3.0 * base.kappa;
        const double lorentz = base.omega_m * base.omega_m + base.gamma * base.gamma / 4;
        const double c = 2 * base.g0 * base.g0 * base.omega_m / lorentz;
        double el_bistable = -1.0;
        for (double el = 1.0; el < 2000.0; el *= 1.02) {
            // x^3 + a2 x^2 + a1 x + a0 with x = c*u
            const double a2 = -2 * d0;
            const double a1 = d0 * d0 + base.kappa * base.kappa / 4;
            const double a0 = -el * el * c;
            const double disc = 18 * a2 * a1 * a0 - 4 * a2 * a2 * a2 * a0 +
                                a2 * a2 * a1 * a1 - 4 * a1 * a1 * a1 -
                                27 * a0 * a0;
            if (disc > 0.0) {
                el_bistable = el;
                break;
            }
        }
        REQUIRE(el_bistable > 0.0);
        const auto roots = fixed_points(base, el_bistable, d0);
        REQUIRE(roots.size() == 3);
        CHECK(roots[0].stable);
        CHECK(!roots[1].stable);  // middle branch is the saddle
        CHECK(roots[2].stable);
        CHECK(roots[2].selected);
        const auto chosen = select_operating_point(roots);
        CHECK(chosen.intensity == roots[2].intensity);
    }
    SUBCASE("selected amplitude grows with drive on a stable branch") {
        double prev = -1.0;
        for (double el = 0.5; el < 30.0; el += 1.0) {
            const auto sel = select_operating_point(fixed_points(base, el, 1.0));
            CHECK(std::abs(sel.alpha) >= prev);
            prev = std::abs(sel.alpha);
        }
    }
    SUBCASE("selected root is Hurwitz by construction") {
        const auto sel = select_operating_point(fixed_points(base, 10.0, 1.0));
        PhysicalParams at = base;
        at.alpha_s = std::abs(sel.alpha);
        Eigen::EigenSolver<Mat4> es(drift_matrix_full(at, sel.detuning));
        CHECK(es.eigenvalues().real().maxCoeff() < 1e-12);
    }
}
