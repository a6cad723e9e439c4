#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "omem/errors.hpp"
#include "omem/montecarlo.hpp"
#include "omem/propagate.hpp"
#include "omem/protocol.hpp"
#include "test_helpers.hpp"

using namespace omem;

namespace {

// Variance of the sample variance of a Gaussian AR(1)-like sequence with
// lag-1 correlation rho: (2 sigma^4 / n) (1 + rho^2) / (1 - rho^2).
double ou_variance_stderr(double variance, long n, double rho) {
    return std::sqrt(2.0 * variance * variance / static_cast<double>(n) *
                     (1.0 + rho * rho) / (1.0 - rho * rho));
}

double sample_variance(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

TEST_CASE("OU path sampler") {
    NoiseSpec noise{/*linewidth=*/2.0, /*cutoff=*/0.8, NoiseMode::Colored};
    const double dt = 0.05;
    const long n = 100000;

    SUBCASE("variance matches Gamma_L * gamma_c within 3 stderr") {
        const auto path = ou_path(noise, dt, n, /*seed=*/12345);
        REQUIRE(path.size() == static_cast<std::size_t>(n) + 1);
        const double target = noise.linewidth * noise.cutoff;
        const double rho = std::exp(-noise.cutoff * dt);
        const double se = ou_variance_stderr(target, n, rho);
        CHECK(std::abs(sample_variance(path) - target) < 3.0 * se);
    }
    SUBCASE("lag-k autocorrelation decays as exp(-gamma_c k dt)") {
        const auto path = ou_path(noise, dt, n, /*seed=*/777);
        const double var = sample_variance(path);
        for (int lag : {1, 5, 20}) {
            double acc = 0.0;
            const std::size_t m = path.size() - static_cast<std::size_t>(lag);
            for (std::size_t i = 0; i < m; ++i) {
                acc += path[i] * path[i + static_cast<std::size_t>(lag)];
            }
            const double corr = acc / static_cast<double>(m) / var;
            const double expect = std::exp(-noise.cutoff * lag * dt);
            CHECK(corr == doctest::Approx(expect).epsilon(0.05));
        }
    }
    SUBCASE("zero linewidth with zero psi0 is identically zero") {
        NoiseSpec off{0.0, 0.8, NoiseMode::Colored};
        const auto path = ou_path(off, dt, 1000, 1, /*psi0_variance=*/0.0);
        for (double v : path) CHECK(v == 0.0);
    }
    SUBCASE("deterministic in the seed") {
        const auto a = ou_path(noise, dt, 1000, 42);
        const auto b = ou_path(noise, dt, 1000, 42);
        CHECK(a == b);
        const auto c = ou_path(noise, dt, 1000, 43);
        CHECK(a != c);
    }
    SUBCASE("white-exact mode is rejected") {
        NoiseSpec white{1.0, 0.0, NoiseMode::WhiteExact};
        CHECK_THROWS_AS(ou_path(white, dt, 10, 1), config_error);
    }
}

TEST_CASE("trajectory sampler vs deterministic engine") {
    // Scaled-down microwave write pulse: same preset rates, fewer scaled
    // time units than the full pulse so the test stays fast.
    PhysicalParams p = test::teufel_params();
    p.noise.linewidth = 1e3;
    p.noise.cutoff = 5e5;
    InputState in;
    in.alpha = {1.0, 0.0};
    in.psi0_mode = PsiInitMode::Stationary;
    const GaussianState s0 = initial_state(in, p);

    const double ts = std::numbers::pi / (2.0 * p.coupling());
    const std::vector<std::pair<CouplingPhase, double>> phases = {
        {CouplingPhase::Write, ts}};

    TrajectoryConfig cfg;
    cfg.dt = 1e-3 / p.omega_m;
    cfg.n_traj = 5000;
    cfg.seed = 20260809;

    const PhysicalParams sp = p.scaled();
    const Mat5 q = drift_matrix(sp, CouplingPhase::Write);
    const Mat5 n = diffusion_matrix(sp);
    GaussianState det = propagate_cov_analytic(s0, q, n, ts * p.omega_m);
    det.mean = propagate_mean(s0, q.topLeftCorner<4, 4>(), ts * p.omega_m, 0.0).mean;

    const EmpiricalMoments mc = simulate_trajectories(p, s0, phases, cfg);

    SUBCASE("means within 3 standard errors") {
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(mc.mean(i) - det.mean(i)) < 3.0 * mc.stderr_mean(i));
        }
    }
    SUBCASE("covariances within 3 standard errors entrywise") {
        for (int i = 0; i < 5; ++i) {
            for (int j = i; j < 5; ++j) {
                const double se = mc.stderr_cov(i, j);
                REQUIRE(se > 0.0);
                CHECK(std::abs(mc.cov(i, j) - det.cov(i, j)) < 3.0 * se);
            }
        }
    }
    SUBCASE("bit-identical on same seed, serial or parallel") {
        TrajectoryConfig serial = cfg;
        serial.n_traj = 400;
        serial.threads = 1;
        TrajectoryConfig parallel = serial;
        parallel.threads = 4;
        const EmpiricalMoments a = simulate_trajectories(p, s0, phases, serial);
        const EmpiricalMoments b = simulate_trajectories(p, s0, phases, parallel);
        CHECK(a.mean == b.mean);
        CHECK(a.cov == b.cov);
        CHECK(a.stderr_cov == b.stderr_cov);
    }
}

TEST_CASE("trajectory sampler properties") {
    PhysicalParams p = test::teufel_params();
    InputState in;
    in.alpha = {1.0, 0.0};
    const GaussianState s0 = initial_state(in, p);
    const double unit = 1.0 / p.omega_m;

    SUBCASE("stderr scales as 1/sqrt(n)") {
        const std::vector<std::pair<CouplingPhase, double>> phases = {
            {CouplingPhase::Write, 10.0 * unit}};
        TrajectoryConfig cfg;
        cfg.dt = 5e-3 * unit;
        cfg.seed = 5;
        std::vector<double> se;
        for (long n : {1250L, 5000L, 20000L}) {
            cfg.n_traj = n;
            se.push_back(simulate_trajectories(p, s0, phases, cfg).stderr_mean(kX2));
        }
        CHECK(se[0] / se[1] == doctest::Approx(2.0).epsilon(0.25));
        CHECK(se[1] / se[2] == doctest::Approx(2.0).epsilon(0.25));
    }
    SUBCASE("weak bias shrinks when dt halves") {
        const double t = 20.0 * unit;
        const std::vector<std::pair<CouplingPhase, double>> phases = {
            {CouplingPhase::Write, t}};
        const PhysicalParams sp = p.scaled();
        const Vec4 exact =
            propagate_mean(s0, drift_matrix_mean(sp, CouplingPhase::Write), 20.0, 0.0).mean;
        TrajectoryConfig cfg;
        cfg.n_traj = 20000;
        cfg.seed = 9;
        const auto bias = [&](double dt_scaled) {
            cfg.dt = dt_scaled * unit;
            const EmpiricalMoments m = simulate_trajectories(p, s0, phases, cfg);
            return (m.mean - exact).norm();
        };
        // Euler-Maruyama is weak order 1; same seed keeps the MC noise
        // correlated so the deterministic bias dominates the difference.
        CHECK(bias(0.04) > bias(0.02));
    }
    SUBCASE("uncoupled noisy cavity relaxes to (1+2Nc)/4") {
        PhysicalParams q = p;
        q.alpha_s = 0.0;
        q.n_cav = 0.8;
        const std::vector<std::pair<CouplingPhase, double>> phases = {
            {CouplingPhase::Write, 80.0 * unit}};
        TrajectoryConfig cfg;
        cfg.dt = 2e-3 * unit;
        cfg.n_traj = 8000;
        cfg.seed = 17;
        const EmpiricalMoments m = simulate_trajectories(q, s0, phases, cfg);
        const double stationary = (1 + 2 * q.n_cav) / 4.0;
        CHECK(std::abs(m.cov(kX2, kX2) - stationary) < 4.0 * m.stderr_cov(kX2, kX2));
        CHECK(std::abs(m.cov(kP2, kP2) - stationary) < 4.0 * m.stderr_cov(kP2, kP2));
    }
    SUBCASE("blow-up detection") {
        PhysicalParams q = p;
        const std::vector<std::pair<CouplingPhase, double>> phases = {
            {CouplingPhase::Write, 50.0 * unit}};
        TrajectoryConfig cfg;
        cfg.dt = 3.0 * unit;  // far beyond the stability limit
        cfg.n_traj = 8;
        cfg.seed = 3;
        CHECK_THROWS_AS(simulate_trajectories(q, s0, phases, cfg), numerical_error);
    }
    SUBCASE("config validation and dt guidance") {
        TrajectoryConfig bad;
        bad.dt = 0.0;
        bad.n_traj = 10;
        CHECK_THROWS_AS(bad.validate(), config_error);
        bad.dt = 1e-9;
        bad.n_traj = 1;
        CHECK_THROWS_AS(bad.validate(), config_error);
        CHECK(recommended_max_dt(p) == doctest::Approx(0.05 / p.omega_m));
    }
}
