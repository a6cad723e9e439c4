#pragma once

#include "omem/params.hpp"

namespace omem {

// Gaussian state of the mechanical+optical pair, extended with the
// frequency-noise variable psi. Covariance is stored symmetrized; the
// quadrature convention x = (a + a^dag)/2 puts the vacuum variance at 1/4.
struct GaussianState {
    Vec4 mean = Vec4::Zero();   // <x1>, <p1>, <x2>, <p2>
    Mat5 cov = Mat5::Zero();    // symmetric, includes psi row/column
    double elapsed = 0.0;       // accumulated physical time (s)

    Vec2 mean_mech() const { return mean.segment<2>(kX1); }
    Vec2 mean_opt() const { return mean.segment<2>(kX2); }
    Mat2 cov_mech() const { return cov.block<2, 2>(kX1, kX1); }
    Mat2 cov_opt() const { return cov.block<2, 2>(kX2, kX2); }
    Mat4 cov_physical() const { return cov.topLeftCorner<4, 4>(); }
    double psi_variance() const { return cov(kPsi, kPsi); }

    // max |V - V^T| entry before symmetrization.
    double symmetry_defect() const;
    void symmetrize();

    // Smallest eigenvalue of V4 + (i/4)*Omega (Hermitian); >= 0 up to
    // roundoff for any physical state.
    double min_uncertainty_eigenvalue() const;

    // Symmetric, uncertainty eigenvalue >= -1e-10, psi variance >= 0.
    bool physical(double tol = 1e-10) const;
};

// Standard symplectic form on (x1,p1,x2,p2) for the vacuum-1/4 convention.
Mat4 symplectic_form();

}  // namespace omem
