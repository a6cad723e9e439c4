#pragma once

#include <Eigen/Dense>
#include <utility>

#include "omem/state.hpp"

namespace omem {

struct PropagationReport {
    enum class Method { Analytic, RK4 };
    Method method = Method::Analytic;
    long steps = 0;
    double max_symmetry_defect = 0.0;
};

// e^M by Pade-13 scaling-and-squaring (Higham's coefficients). Relative
// accuracy ~1e-13 on well-scaled inputs. Throws numerical_error on
// non-finite entries.
Eigen::MatrixXd expm(const Eigen::MatrixXd& m);
Eigen::MatrixXd expm(const Eigen::MatrixXd& m, double t);

// (e^{Qt}, integral_0^t e^{Q(t-s)} N e^{Q^T(t-s)} ds) via the block
// exponential of [[-Q, N],[0, Q^T]], substepped through the semigroup
// identity so the anti-stable -Q block cannot overflow for large
// damping*t. Exact up to expm accuracy; no step-size tuning.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> transition_with_noise_integral(
    const Eigen::MatrixXd& drift, const Eigen::MatrixXd& diffusion, double t);

// mean <- e^{Q4 t} mean; covariance untouched. `seconds_per_unit` converts
// the (possibly scaled) time t into the SI seconds added to `elapsed`; pass
// 1/omega_m when t is omega_m-scaled, 1.0 when t is already seconds.
GaussianState propagate_mean(const GaussianState& state, const Mat4& drift, double t,
                             double seconds_per_unit = 1.0);

// cov <- e^{Qt} V e^{Q^T t} + integral(...). Result re-symmetrized; the
// defect goes into the report when one is supplied.
GaussianState propagate_cov_analytic(const GaussianState& state, const Mat5& drift,
                                     const Mat5& diffusion, double t,
                                     double seconds_per_unit = 1.0,
                                     PropagationReport* report = nullptr);

// Classical RK4 on dV/dt = Q V + V Q^T + N with fixed step dt (final step
// shortened to land on t exactly). Kept as an independent cross-check of
// the analytic path.
GaussianState propagate_cov_ode(const GaussianState& state, const Mat5& drift,
                                const Mat5& diffusion, double t, double dt,
                                double seconds_per_unit = 1.0,
                                PropagationReport* report = nullptr);

}  // namespace omem
