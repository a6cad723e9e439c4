#include "omem/drift.hpp"

#include "omem/errors.hpp"

namespace omem {

Mat5 drift_matrix(const PhysicalParams& p, CouplingPhase phase) {
    const double G = (phase == CouplingPhase::Store)  ? 0.0
                     : (phase == CouplingPhase::Read) ? -p.coupling()
                                                      : p.coupling();
    // The laser is off during Store, so psi cannot drive p2 there. In the
    // exact white-noise mode the drive is folded into the diffusion instead.
    const bool psi_drive =
        phase != CouplingPhase::Store && p.noise.mode != NoiseMode::WhiteExact;

    Mat5 q = Mat5::Zero();
    q(kX1, kX1) = -p.gamma / 2;
    q(kX1, kP1) = p.omega_m;
    q(kX1, kP2) = -G;
    q(kP1, kX1) = -p.omega_m;
    q(kP1, kP1) = -p.gamma / 2;
    q(kP1, kX2) = G;
    q(kX2, kP1) = -G;
    q(kX2, kX2) = -p.kappa / 2;
    q(kX2, kP2) = p.omega_m;
    q(kP2, kX1) = G;
    q(kP2, kX2) = -p.omega_m;
    q(kP2, kP2) = -p.kappa / 2;
    q(kP2, kPsi) = psi_drive ? -p.alpha_s : 0.0;
    q(kPsi, kPsi) = -p.noise.cutoff;
    return q;
}

Mat4 drift_matrix_mean(const PhysicalParams& p, CouplingPhase phase) {
    return drift_matrix(p, phase).topLeftCorner<4, 4>();
}

Mat5 diffusion_matrix(const PhysicalParams& p) {
    p.noise.validate();
    const double gbar = p.gamma * (1.0 + 2.0 * p.n_mech);
    const double kbar = p.kappa * (1.0 + 2.0 * p.n_cav);

    Mat5 n = Mat5::Zero();
    n(kX1, kX1) = n(kP1, kP1) = gbar / 4;
    n(kX2, kX2) = n(kP2, kP2) = kbar / 4;
    switch (p.noise.mode) {
        case NoiseMode::Colored:
            n(kPsi, kPsi) = 2.0 * p.noise.cutoff * p.noise.cutoff * p.noise.linewidth;
            break;
        case NoiseMode::WhiteExact:
            // <alpha_s phi_dot(t) alpha_s phi_dot(t')> = 2 Gamma_L alpha_s^2 d(t-t')
            n(kP2, kP2) += 2.0 * p.noise.linewidth * p.alpha_s * p.alpha_s;
            break;
        case NoiseMode::NoNoise:
            break;
    }
    return n;
}

Mat5 rotation_generator(double omega_m) {
    Mat5 q = Mat5::Zero();
    q(kX1, kP1) = omega_m;
    q(kP1, kX1) = -omega_m;
    q(kX2, kP2) = omega_m;
    q(kP2, kX2) = -omega_m;
    return q;
}

Mat4 drift_matrix_full(const PhysicalParams& p, double delta) {
    const double G = p.coupling();
    Mat4 q = Mat4::Zero();
    q(kX1, kX1) = -p.gamma / 2;
    q(kX1, kP1) = p.omega_m;
    q(kP1, kX1) = -p.omega_m;
    q(kP1, kP1) = -p.gamma / 2;
    q(kP1, kX2) = 2.0 * G;
    q(kX2, kX2) = -p.kappa / 2;
    q(kX2, kP2) = delta;
    q(kP2, kX1) = 2.0 * G;
    q(kP2, kX2) = -delta;
    q(kP2, kP2) = -p.kappa / 2;
    return q;
}

Mat4 DriftSet::mean(CouplingPhase phase) const {
    switch (phase) {
        case CouplingPhase::Write: return write.topLeftCorner<4, 4>();
        case CouplingPhase::Store: return store.topLeftCorner<4, 4>();
        case CouplingPhase::Read: return read.topLeftCorner<4, 4>();
    }
    throw config_error("DriftSet::mean: bad phase");
}

DriftSet DriftSet::build(const PhysicalParams& p, double delta) {
    DriftSet d;
    d.write = drift_matrix(p, CouplingPhase::Write);
    d.store = drift_matrix(p, CouplingPhase::Store);
    d.read = drift_matrix(p, CouplingPhase::Read);
    d.rotation = rotation_generator(p.omega_m);
    d.stability = drift_matrix_full(p, delta);
    return d;
}

DriftSet DriftSet::build(const PhysicalParams& p) { return build(p, p.omega_m); }

}  // namespace omem
