#pragma once

#include <complex>
#include <vector>

#include "omem/params.hpp"

namespace omem {

// One root of the intracavity-field fixed-point equations
//   alpha * (i*Delta + kappa/2) = E_L,   Delta = Delta0 - g0*(beta + beta*)
//   beta * (i*omega_m + gamma/2) = i * g0 * |alpha|^2
// The laser phase is chosen so alpha is real and non-negative.
struct FixedPoint {
    std::complex<double> alpha;  // steady intracavity amplitude
    std::complex<double> beta;   // steady mechanical displacement
    double detuning = 0.0;       // effective detuning Delta (rad/s)
    double intensity = 0.0;      // u = |alpha|^2
    bool stable = false;         // non-RWA drift Hurwitz at this root
    bool selected = false;       // highest-intensity stable root
};

// Solves the degree-3 polynomial in u = |alpha|^2,
//   u * [ (Delta0 - 2 g0^2 u omega_m / (omega_m^2 + gamma^2/4))^2 + kappa^2/4 ] = E_L^2,
// returning every real non-negative root sorted by intensity, each stability-
// classified via the eigenvalues of drift_matrix_full. alpha_s in `base` is
// ignored. Every root is Newton-polished to residual <= 1e-10 on both
// fixed-point equations (relative, omega_m-scaled).
std::vector<FixedPoint> fixed_points(const PhysicalParams& base, double drive_amplitude,
                                     double detuning0);

// The root the protocol operates at: highest intensity among stable roots.
// Throws instability_error when no stable root exists.
FixedPoint select_operating_point(const std::vector<FixedPoint>& roots);

// Scaled residuals of the two fixed-point equations at a candidate root;
// max of the two. Exposed for tests.
double fixed_point_residual(const PhysicalParams& base, double drive_amplitude,
                            double detuning0, const FixedPoint& fp);

}  // namespace omem
