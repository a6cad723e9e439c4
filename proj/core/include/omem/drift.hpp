#pragma once

#include "omem/params.hpp"

namespace omem {

// Builders for every matrix the covariance formalism needs. All of them are
// pure functions of the parameter set and work in whatever units the
// parameters carry (SI rad/s, or scaled if params.scaled() was applied).

// Extended 5x5 drift. Write:
//
//        [ -g/2   w_m    0    -G     0   ]
//        [ -w_m  -g/2    G     0     0   ]
//        [  0     -G   -k/2   w_m    0   ]
//        [  G      0   -w_m  -k/2  -a_s  ]
//        [  0      0     0     0   -g_c  ]
//
// Store zeroes the G entries and the -a_s injection (control laser off);
// Read negates G (read pulse pi out of phase) and keeps -a_s.
// In WhiteExact mode the psi injection is absent in all phases (the noise
// lives in the diffusion matrix instead).
Mat5 drift_matrix(const PhysicalParams& p, CouplingPhase phase);

// Upper-left 4x4 block of drift_matrix; propagates the noise-free means.
Mat4 drift_matrix_mean(const PhysicalParams& p, CouplingPhase phase);

// Diffusion matrix. Colored / NoNoise:
//   diag(gbar/4, gbar/4, kbar/4, kbar/4, 2*gamma_c^2*Gamma_L)
// with gbar = gamma*(1+2*N_m), kbar = kappa*(1+2*N_C).
// WhiteExact: psi entry zero, p2 entry augmented by 2*Gamma_L*alpha_s^2.
// Throws config_error for WhiteExact with nonzero cutoff (mutually exclusive).
Mat5 diffusion_matrix(const PhysicalParams& p);

// Free-rotation generator: 2x2 blocks [[0, w],[-w, 0]] on both modes, psi
// row/column zero. exp(-Q_r t) is orthogonal on the physical 4x4 block.
Mat5 rotation_generator(double omega_m);

// Pre-RWA quadrature drift at effective detuning `delta`; used only for
// stability classification (the RWA drift is Hurwitz for any positive
// damping and cannot detect bistability).
Mat4 drift_matrix_full(const PhysicalParams& p, double delta);

// All drift variants for one configuration.
struct DriftSet {
    Mat5 write;
    Mat5 store;
    Mat5 read;
    Mat5 rotation;   // Q_r
    Mat4 stability;  // non-RWA drift at the given detuning

    Mat4 mean(CouplingPhase phase) const;

    static DriftSet build(const PhysicalParams& p, double delta);
    // Detuning defaults to the red-sideband operating point delta = omega_m.
    static DriftSet build(const PhysicalParams& p);
};

}  // namespace omem
