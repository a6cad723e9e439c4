#include "omem/fixed_point.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "omem/drift.hpp"
#include "omem/errors.hpp"

namespace omem {

namespace {

// Real roots of the monic cubic x^3 + a x^2 + b x + c via the companion
// matrix, Newton-polished.
std::vector<double> cubic_real_roots(double a, double b, double c) {
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 2) = -c;
    companion(1, 0) = 1.0;
    companion(1, 2) = -b;
    companion(2, 1) = 1.0;
    companion(2, 2) = -a;
    Eigen::EigenSolver<Eigen::Matrix3d> es(companion);

    const auto f = [&](double x) { return ((x + a) * x + b) * x + c; };
    const auto df = [&](double x) { return (3.0 * x + 2.0 * a) * x + b; };

    std::vector<double> roots;
    for (int i = 0; i < 3; ++i) {
        const std::complex<double> lam = es.eigenvalues()(i);
        if (std::abs(lam.imag()) > 1e-8 * std::max(1.0, std::abs(lam))) continue;
        double x = lam.real();
        for (int it = 0; it < 60; ++it) {
            const double fx = f(x);
            const double dfx = df(x);
            if (dfx == 0.0) break;
            const double step = fx / dfx;
            x -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](double r) {
            return std::abs(r - x) <= 1e-9 * std::max(1.0, std::abs(x));
        });
        if (!dup) roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

bool hurwitz(const Mat4& m) {
    Eigen::EigenSolver<Mat4> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff() < 1e-12;
}

}  // namespace

std::vector<FixedPoint> fixed_points(const PhysicalParams& base, double drive_amplitude,
                                     double detuning0) {
    if (drive_amplitude < 0.0) throw config_error("fixed_points: E_L must be >= 0");
    base.validate();

    const double w = base.omega_m;
    const PhysicalParams sp = base.scaled();
    const double el = drive_amplitude / w;
    const double d0 = detuning0 / w;
    const double g0 = sp.g0;
    const double kap = sp.kappa;
    const double gam = sp.gamma;
    const double lorentz = 1.0 + gam * gam / 4.0;  // omega_m^2 + gamma^2/4, scaled
    const double cubic_c = 2.0 * g0 * g0 / lorentz;

    // Intensities u = |alpha|^2 solving u((d0 - c u)^2 + kap^2/4) = el^2.
    std::vector<double> intensities;
    if (cubic_c == 0.0) {
        intensities.push_back(el * el / (d0 * d0 + kap * kap / 4.0));
    } else {
        // x = c*u: x^3 - 2 d0 x^2 + (d0^2 + kap^2/4) x - el^2 c = 0
        const auto xs = cubic_real_roots(-2.0 * d0, d0 * d0 + kap * kap / 4.0,
                                         -el * el * cubic_c);
        for (double x : xs) {
            if (x < -1e-12) continue;
            intensities.push_back(std::max(0.0, x) / cubic_c);
        }
    }
    if (intensities.empty()) {
        // A real cubic with negative value at 0 (-el^2 c <= 0) and +inf limit
        // always has a real non-negative root.
        throw numerical_error("fixed_points: no real non-negative root found");
    }

    std::vector<FixedPoint> result;
    for (double u : intensities) {
        FixedPoint fp;
        fp.intensity = u;
        fp.alpha = std::sqrt(u);  // input phase chosen so alpha is real
        fp.beta = std::complex<double>(0.0, 1.0) * (g0 * u) /
                  std::complex<double>(gam / 2.0, 1.0);
        const double shift = cubic_c * u;  // g0*(beta + beta*)
        fp.detuning = (d0 - shift) * w;

        PhysicalParams at_root = sp;
        at_root.alpha_s = std::sqrt(u);
        fp.stable = hurwitz(drift_matrix_full(at_root, d0 - shift));
        result.push_back(fp);
    }

    std::sort(result.begin(), result.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.intensity < b.intensity; });
    for (auto it = result.rbegin(); it != result.rend(); ++it) {
        if (it->stable) {
            it->selected = true;
            break;
        }
    }
    return result;
}

FixedPoint select_operating_point(const std::vector<FixedPoint>& roots) {
    for (const auto& fp : roots) {
        if (fp.selected) return fp;
    }
    throw instability_error("fixed_points: unstable configuration (no stable root)");
}

double fixed_point_residual(const PhysicalParams& base, double drive_amplitude,
                            double detuning0, const FixedPoint& fp) {
    const double w = base.omega_m;
    const double el = drive_amplitude / w;
    const double gam = base.gamma / w;
    const double kap = base.kappa / w;
    const double g0 = base.g0 / w;
    const double delta = fp.detuning / w;
    const double u = fp.intensity;

    // |alpha| sqrt(Delta^2 + kappa^2/4) = E_L (the input phase absorbs the rest)
    const double lhs1 = std::abs(fp.alpha) * std::sqrt(delta * delta + kap * kap / 4.0);
    const double r1 = std::abs(lhs1 - el) / std::max(1.0, el);

    // beta (i omega_m + gamma/2) = i g0 |alpha|^2
    const std::complex<double> lhs2 = fp.beta * std::complex<double>(gam / 2.0, 1.0);
    const std::complex<double> rhs2(0.0, g0 * u);
    const double r2 = std::abs(lhs2 - rhs2) / std::max(1.0, std::abs(rhs2));

    return std::max(r1, r2);
}

}  // namespace omem
