#include "omem/propagate.hpp"

#include <algorithm>
#include <cmath>

#include "omem/errors.hpp"

namespace omem {

namespace {

using Eigen::MatrixXd;

// Pade coefficients for degrees 3..13 (Higham 2005).
constexpr double kB3[] = {120, 60, 12, 1};
constexpr double kB5[] = {30240, 15120, 3360, 420, 30, 1};
constexpr double kB7[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
constexpr double kB9[] = {17643225600., 8821612800., 2075673600., 302702400.,
                          30270240.,    2162160.,    110880.,     3960.,
                          90.,          1.};
constexpr double kB13[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                           1187353796428800.,  129060195264000.,   10559470521600.,
                           670442572800.,      33522128640.,       1323241920.,
                           40840800.,          960960.,            16380.,
                           182.,               1.};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068;
constexpr double kTheta13 = 5.371920351148152;

MatrixXd pade_solve(const MatrixXd& u, const MatrixXd& v) {
    return (v - u).partialPivLu().solve(v + u);
}

// Degree-m approximant for m in {3,5,7,9} from precomputed even powers.
MatrixXd pade_low(const MatrixXd& a, const MatrixXd& a2, const MatrixXd& a4,
                  const MatrixXd& a6, const MatrixXd& a8, const double* b, int m) {
    const auto n = a.rows();
    const MatrixXd id = MatrixXd::Identity(n, n);
    MatrixXd u_poly = b[1] * id;
    MatrixXd v = b[0] * id;
    if (m >= 3) { u_poly += b[3] * a2; v += b[2] * a2; }
    if (m >= 5) { u_poly += b[5] * a4; v += b[4] * a4; }
    if (m >= 7) { u_poly += b[7] * a6; v += b[6] * a6; }
    if (m >= 9) { u_poly += b[9] * a8; v += b[8] * a8; }
    return pade_solve(a * u_poly, v);
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw numerical_error("expm: matrix must be square");
    if (!m.allFinite()) throw numerical_error("expm: non-finite entries");

    const auto n = m.rows();
    const MatrixXd id = MatrixXd::Identity(n, n);
    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    if (norm == 0.0) return id;

    const MatrixXd a2 = m * m;
    if (norm <= kTheta9) {
        const MatrixXd a4 = a2 * a2;
        const MatrixXd a6 = a4 * a2;
        const MatrixXd a8 = a4 * a4;
        if (norm <= kTheta3) return pade_low(m, a2, a4, a6, a8, kB3, 3);
        if (norm <= kTheta5) return pade_low(m, a2, a4, a6, a8, kB5, 5);
        if (norm <= kTheta7) return pade_low(m, a2, a4, a6, a8, kB7, 7);
        return pade_low(m, a2, a4, a6, a8, kB9, 9);
    }

    int squarings = 0;
    MatrixXd a = m;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
        a /= std::ldexp(1.0, squarings);
    }
    const MatrixXd s2 = a * a;
    const MatrixXd s4 = s2 * s2;
    const MatrixXd s6 = s4 * s2;
    const MatrixXd u = a * (s6 * (kB13[13] * s6 + kB13[11] * s4 + kB13[9] * s2) +
                            kB13[7] * s6 + kB13[5] * s4 + kB13[3] * s2 + kB13[1] * id);
    const MatrixXd v = s6 * (kB13[12] * s6 + kB13[10] * s4 + kB13[8] * s2) +
                       kB13[6] * s6 + kB13[4] * s4 + kB13[2] * s2 + kB13[0] * id;
    MatrixXd r = pade_solve(u, v);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& m, double t) {
    if (!std::isfinite(t)) throw numerical_error("expm: non-finite time");
    return expm((m * t).eval());
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> transition_with_noise_integral(
    const Eigen::MatrixXd& drift, const Eigen::MatrixXd& diffusion, double t) {
    const auto n = drift.rows();
    if (t == 0.0) return {MatrixXd::Identity(n, n), MatrixXd::Zero(n, n)};
    if (t < 0.0) throw numerical_error("noise integral: t must be >= 0");

    // The -Q block grows like exp(max damping * t); substep so each factor
    // stays far below overflow. Damping sits on the diagonal for every
    // drift this engine builds.
    const double damping = drift.diagonal().cwiseAbs().maxCoeff();
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(damping * t / 30.0)));
    const double h = t / static_cast<double>(steps);

    MatrixXd block = MatrixXd::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = -drift;
    block.topRightCorner(n, n) = diffusion;
    block.bottomRightCorner(n, n) = drift.transpose();
    const MatrixXd e = expm(block, h);

    // e = [[e^{-Qh}, F],[0, e^{Q^T h}]] with e^{Qh} F = int_0^h e^{Qs} N e^{Q^T s} ds
    const MatrixXd step_transition = e.bottomRightCorner(n, n).transpose();
    const MatrixXd step_integral = step_transition * e.topRightCorner(n, n);

    MatrixXd transition = MatrixXd::Identity(n, n);
    MatrixXd integral = MatrixXd::Zero(n, n);
    for (long i = 0; i < steps; ++i) {
        integral = step_transition * integral * step_transition.transpose() + step_integral;
        transition = step_transition * transition;
    }
    return {transition, integral};
}

GaussianState propagate_mean(const GaussianState& state, const Mat4& drift, double t,
                             double seconds_per_unit) {
    if (t < 0.0) throw numerical_error("propagate_mean: t must be >= 0");
    GaussianState out = state;
    if (t > 0.0) out.mean = expm(drift, t) * state.mean;
    out.elapsed += t * seconds_per_unit;
    return out;
}

GaussianState propagate_cov_analytic(const GaussianState& state, const Mat5& drift,
                                     const Mat5& diffusion, double t,
                                     double seconds_per_unit, PropagationReport* report) {
    if (t < 0.0) throw numerical_error("propagate_cov_analytic: t must be >= 0");
    GaussianState out = state;
    if (t > 0.0) {
        auto [transition, integral] = transition_with_noise_integral(drift, diffusion, t);
        out.cov = transition * state.cov * transition.transpose() + integral;
    }
    const double defect = out.symmetry_defect();
    out.symmetrize();
    out.elapsed += t * seconds_per_unit;
    if (report) {
        report->method = PropagationReport::Method::Analytic;
        report->steps += 1;
        report->max_symmetry_defect = std::max(report->max_symmetry_defect, defect);
    }
    return out;
}

GaussianState propagate_cov_ode(const GaussianState& state, const Mat5& drift,
                                const Mat5& diffusion, double t, double dt,
                                double seconds_per_unit, PropagationReport* report) {
    if (t < 0.0) throw numerical_error("propagate_cov_ode: t must be >= 0");
    if (!(dt > 0.0)) throw numerical_error("propagate_cov_ode: dt must be > 0");

    GaussianState out = state;
    const long steps = (t == 0.0) ? 0 : std::max<long>(1, static_cast<long>(std::ceil(t / dt)));
    const double h = (steps > 0) ? t / static_cast<double>(steps) : 0.0;

    const auto rhs = [&](const Mat5& v) -> Mat5 {
        return drift * v + v * drift.transpose() + diffusion;
    };
    Mat5 v = out.cov;
    for (long i = 0; i < steps; ++i) {
        const Mat5 k1 = rhs(v);
        const Mat5 k2 = rhs(v + (h / 2) * k1);
        const Mat5 k3 = rhs(v + (h / 2) * k2);
        const Mat5 k4 = rhs(v + h * k3);
        v += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    out.cov = v;
    const double defect = out.symmetry_defect();
    out.symmetrize();
    out.elapsed += t * seconds_per_unit;
    if (report) {
        report->method = PropagationReport::Method::RK4;
        report->steps += steps;
        report->max_symmetry_defect = std::max(report->max_symmetry_defect, defect);
    }
    return out;
}

}  // namespace omem
