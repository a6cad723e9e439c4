#pragma once

#include <complex>

#include "omem/drift.hpp"
#include "omem/state.hpp"

namespace omem {

enum class PsiInitMode {
    PaperQuarter,  // Var psi(0) = 1/4 (rad/s)^2 -- numerically negligible
    Stationary,    // Var psi(0) = Gamma_L * gamma_c, the OU equilibrium
};

enum class RotationMode {
    FixedTotalTime,   // undo the free rotation over 2*t_s + tau
    NumericOptimize,  // scan + golden-section refine the rotation angle
};

// Squeezed coherent input |alpha, r> in the optical mode; mechanical mode
// ground-state cooled or thermal at N_m.
struct InputState {
    std::complex<double> alpha{0.0, 0.0};
    double squeezing = 0.0;  // r
    bool mechanical_cooled = true;
    PsiInitMode psi0_mode = PsiInitMode::PaperQuarter;
};

struct ProtocolSpec {
    double pulse_duration = 0.0;  // t_s (s); <= 0 means the pi/2 value pi/(2G)
    double storage_time = 0.0;    // tau (s)
    RotationMode rotation = RotationMode::FixedTotalTime;
    // Model the cooling pre-pulse explicitly: one Write-phase propagation
    // from thermal-mechanical / vacuum-optical, then the optical mode is
    // reset to the input state before the write pulse proper.
    bool explicit_precool = false;

    double resolved_pulse_duration(const PhysicalParams& p) const;
};

struct FidelityResult {
    double fidelity = 0.0;          // F in (0, 1]
    double heating_quanta = 0.0;    // n_h = 2 sqrt(det(Vi+Vf)) - 1
    double damping_parameter = 0.0; // lambda
    double rotation_angle = 0.0;    // compensation angle actually applied (rad)
};

// Mean (0, 0, Re alpha, Im alpha); covariance
// diag(m/4, m/4, e^{-2r}/4, e^{+2r}/4, psi0) with m = 1 (cooled) or 1+2*N_m.
// Scaled units (rates are divided by omega_m before any propagation).
GaussianState initial_state(const InputState& input, const PhysicalParams& p);

// Write (t_s) -> Store (tau) -> Read (t_s with G -> -G) applied to mean and
// covariance. Diffusion acts in all three segments; the psi (phase-noise)
// injection and diffusion act only while the control laser is on, i.e. in
// Write and Read. Returns the final state before rotation compensation.
GaussianState run_protocol(const PhysicalParams& p, const GaussianState& s0,
                           const ProtocolSpec& spec);

// Rotation compensation. FixedTotalTime applies exp(-Q_r (2 t_s + tau));
// NumericOptimize scans theta over [0, 2pi) on a 720-point grid and refines
// by golden section, maximizing fidelity against `reference` (required in
// that mode). The chosen angle is written to *theta_out when non-null.
GaussianState rotate_compensate(const GaussianState& state, const ProtocolSpec& spec,
                                const PhysicalParams& p,
                                const GaussianState* reference = nullptr,
                                double* theta_out = nullptr);

// Gaussian fidelity on the optical (x2, p2) blocks:
//   n_h    = 2 sqrt(det(Vi + Vf)) - 1
//   lambda^2 = dxi . [ sqrt(det(Vi+Vf)) (Vi+Vf)^{-1} ] dxi
//   F      = exp(-lambda^2 / (1 + n_h)) / (1 + n_h)
// Throws degenerate_state_error when det(Vi+Vf) <= 0.
FidelityResult fidelity(const GaussianState& initial, const GaussianState& final_state);

// Full pipeline: initial_state -> run_protocol -> rotate_compensate ->
// fidelity against the initial state.
FidelityResult protocol_fidelity(const PhysicalParams& p, const InputState& input,
                                 const ProtocolSpec& spec);

// Rotate means and covariance of a state by exp(-Q_r * angle/omega) (i.e.
// by `angle` radians on both modes); psi is untouched.
GaussianState rotate_state(const GaussianState& state, double angle);

}  // namespace omem
