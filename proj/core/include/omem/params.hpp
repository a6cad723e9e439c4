#pragma once

#include <Eigen/Dense>

namespace omem {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// State-vector ordering used everywhere: (x1, p1, x2, p2, psi).
// Mode 1 is mechanical, mode 2 is optical; psi is the auxiliary
// laser-frequency-noise variable. Vacuum variance is 1/4 per quadrature.
inline constexpr int kX1 = 0, kP1 = 1, kX2 = 2, kP2 = 3, kPsi = 4;

enum class NoiseMode {
    Colored,     // Ornstein-Uhlenbeck frequency noise with cutoff gamma_c
    WhiteExact,  // exact delta-correlated limit, folded into the p2 diffusion
    NoNoise,
};

enum class CouplingPhase { Write, Store, Read };

// Control-laser frequency-noise model. `linewidth` is Gamma_L, `cutoff`
// is gamma_c, both in rad/s.
struct NoiseSpec {
    double linewidth = 0.0;
    double cutoff = 0.0;
    NoiseMode mode = NoiseMode::NoNoise;

    // NoNoise and Colored-with-zero-linewidth are the same dynamics.
    bool off() const { return mode == NoiseMode::NoNoise || linewidth == 0.0; }
    void validate() const;
};

// One cavity-oscillator-laser configuration. All rates in rad/s;
// alpha_s and the occupancies are dimensionless.
struct PhysicalParams {
    double omega_m = 0.0;   // mechanical frequency
    double kappa = 0.0;     // cavity energy decay rate
    double gamma = 0.0;     // mechanical decay rate
    double g0 = 0.0;        // single-photon coupling
    double alpha_s = 0.0;   // steady intracavity amplitude (real, >= 0)
    double n_mech = 0.0;    // mean thermal phonon occupancy N_m
    double n_cav = 0.0;     // mean thermal photon occupancy N_C
    NoiseSpec noise;

    double coupling() const { return g0 * alpha_s; }  // G = g0 * alpha_s
    double quality_factor() const { return omega_m / gamma; }

    // Throws config_error on violated invariants (omega_m, kappa > 0; the
    // rest >= 0). kappa >= omega_m is legal but outside the resolved-sideband
    // regime the swap protocol assumes; see resolved_sideband().
    void validate() const;
    bool resolved_sideband() const { return kappa < omega_m; }

    // Same configuration with every rate divided by omega_m (omega_m -> 1).
    // Times must then be multiplied by omega_m. alpha_s and occupancies are
    // untouched; psi is implicitly rescaled by 1/omega_m, which is already
    // consistent: its diffusion 2*gamma_c^2*Gamma_L picks up 1/omega_m^3
    // from the three scaled rate factors.
    PhysicalParams scaled() const;

    // Alternative construction: specify G directly, alpha_s = G / g0.
    static PhysicalParams from_coupling(double omega_m, double kappa, double gamma,
                                        double g0, double G, double n_mech,
                                        double n_cav, NoiseSpec noise = {});
};

// Bose occupation 1/(exp(hbar*omega/kB*T) - 1). T in kelvin, omega in rad/s.
double thermal_occupation(double temperature, double omega);

}  // namespace omem
