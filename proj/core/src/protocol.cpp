#include "omem/protocol.hpp"

#include <cmath>
#include <numbers>

#include "omem/errors.hpp"
#include "omem/propagate.hpp"

namespace omem {

namespace {

// Diffusion for one protocol segment: the laser is off while the state is
// stored, so the phase-noise input (psi diffusion, or the white-limit p2
// term) acts only during Write and Read.
Mat5 segment_diffusion(const PhysicalParams& p, CouplingPhase phase) {
    Mat5 n = diffusion_matrix(p);
    if (phase == CouplingPhase::Store) {
        n(kPsi, kPsi) = 0.0;
        if (p.noise.mode == NoiseMode::WhiteExact) {
            n(kP2, kP2) -= 2.0 * p.noise.linewidth * p.alpha_s * p.alpha_s;
        }
    }
    return n;
}

GaussianState run_segment(const GaussianState& s, const PhysicalParams& scaled_params,
                          CouplingPhase phase, double t_scaled, double seconds_per_unit) {
    const Mat5 q = drift_matrix(scaled_params, phase);
    const Mat5 n = segment_diffusion(scaled_params, phase);
    GaussianState out = propagate_cov_analytic(s, q, n, t_scaled, seconds_per_unit);
    out.mean = propagate_mean(s, q.topLeftCorner<4, 4>(), t_scaled, 0.0).mean;
    return out;
}

double psi0_variance_scaled(const InputState& input, const PhysicalParams& p) {
    switch (input.psi0_mode) {
        case PsiInitMode::PaperQuarter:
            return 0.25 / (p.omega_m * p.omega_m);
        case PsiInitMode::Stationary:
            return (p.noise.linewidth / p.omega_m) * (p.noise.cutoff / p.omega_m);
    }
    throw config_error("initial_state: bad psi0 mode");
}

}  // namespace

double ProtocolSpec::resolved_pulse_duration(const PhysicalParams& p) const {
    if (pulse_duration > 0.0) return pulse_duration;
    const double g = p.coupling();
    if (!(g > 0.0)) {
        throw config_error("protocol: pi/2 pulse duration needs G > 0 (set t_s explicitly)");
    }
    return std::numbers::pi / (2.0 * g);
}

GaussianState initial_state(const InputState& input, const PhysicalParams& p) {
    p.validate();
    if (!std::isfinite(input.squeezing) || !std::isfinite(std::abs(input.alpha))) {
        throw config_error("initial_state: alpha and r must be finite");
    }
    const double mech = input.mechanical_cooled ? 1.0 : 1.0 + 2.0 * p.n_mech;

    GaussianState s;
    s.mean << 0.0, 0.0, input.alpha.real(), input.alpha.imag();
    s.cov.setZero();
    s.cov(kX1, kX1) = s.cov(kP1, kP1) = mech / 4.0;
    s.cov(kX2, kX2) = std::exp(-2.0 * input.squeezing) / 4.0;
    s.cov(kP2, kP2) = std::exp(2.0 * input.squeezing) / 4.0;
    s.cov(kPsi, kPsi) = psi0_variance_scaled(input, p);
    return s;
}

GaussianState run_protocol(const PhysicalParams& p, const GaussianState& s0,
                           const ProtocolSpec& spec) {
    p.validate();
    if (spec.storage_time < 0.0) throw config_error("protocol: tau must be >= 0");

    const double w = p.omega_m;
    const PhysicalParams sp = p.scaled();
    const double ts = spec.resolved_pulse_duration(p) * w;  // scaled
    const double tau = spec.storage_time * w;
    const double spu = 1.0 / w;

    GaussianState s = s0;
    if (spec.explicit_precool) {
        // Cooling pulse: swap a thermal mechanical mode against vacuum, then
        // feed the actual input state into the emptied optical mode.
        GaussianState pre;
        pre.cov.setZero();
        pre.cov(kX1, kX1) = pre.cov(kP1, kP1) = (1.0 + 2.0 * p.n_mech) / 4.0;
        pre.cov(kX2, kX2) = pre.cov(kP2, kP2) = 0.25;
        pre.cov(kPsi, kPsi) = s0.cov(kPsi, kPsi);
        pre = run_segment(pre, sp, CouplingPhase::Write, ts, spu);

        pre.mean.segment<2>(kX2) = s0.mean.segment<2>(kX2);
        pre.mean.segment<2>(kX1).setZero();
        pre.cov.block<2, 2>(kX2, kX2) = s0.cov.block<2, 2>(kX2, kX2);
        pre.cov.block<2, 2>(kX1, kX2).setZero();
        pre.cov.block<2, 2>(kX2, kX1).setZero();
        pre.cov(kX2, kPsi) = pre.cov(kP2, kPsi) = 0.0;
        pre.cov(kPsi, kX2) = pre.cov(kPsi, kP2) = 0.0;
        s = pre;
    }

    s = run_segment(s, sp, CouplingPhase::Write, ts, spu);
    s = run_segment(s, sp, CouplingPhase::Store, tau, spu);
    s = run_segment(s, sp, CouplingPhase::Read, ts, spu);
    return s;
}

GaussianState rotate_state(const GaussianState& state, double angle) {
    const double c = std::cos(angle);
    const double sn = std::sin(angle);
    Mat2 r;
    r << c, -sn, sn, c;
    Mat5 r5 = Mat5::Identity();
    r5.block<2, 2>(kX1, kX1) = r;
    r5.block<2, 2>(kX2, kX2) = r;

    GaussianState out = state;
    out.mean = r5.topLeftCorner<4, 4>() * state.mean;
    out.cov = r5 * state.cov * r5.transpose();
    out.symmetrize();
    return out;
}

GaussianState rotate_compensate(const GaussianState& state, const ProtocolSpec& spec,
                                const PhysicalParams& p, const GaussianState* reference,
                                double* theta_out) {
    const double ts = spec.resolved_pulse_duration(p);
    const double total = 2.0 * ts + spec.storage_time;

    if (spec.rotation == RotationMode::FixedTotalTime) {
        const double theta = p.omega_m * total;
        if (theta_out) *theta_out = theta;
        return rotate_state(state, theta);
    }

    if (!reference) {
        throw config_error("rotate_compensate: NumericOptimize needs the reference state");
    }
    const auto score = [&](double theta) {
        return fidelity(*reference, rotate_state(state, theta)).fidelity;
    };

    constexpr int kGrid = 720;
    const double two_pi = 2.0 * std::numbers::pi;
    double best_theta = 0.0;
    double best = -1.0;
    for (int i = 0; i < kGrid; ++i) {
        const double theta = two_pi * i / kGrid;
        const double f = score(theta);
        if (f > best) {
            best = f;
            best_theta = theta;
        }
    }
    // Golden-section refinement around the best grid cell.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_theta - two_pi / kGrid;
    double hi = best_theta + two_pi / kGrid;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = score(x1);
    double f2 = score(x2);
    for (int it = 0; it < 80 && (hi - lo) > 1e-12; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = score(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = score(x1);
        }
    }
    const double theta = (f1 > f2) ? x1 : x2;
    const double refined = score(theta);
    const double final_theta = (refined >= best) ? theta : best_theta;
    if (theta_out) *theta_out = final_theta;
    return rotate_state(state, final_theta);
}

FidelityResult fidelity(const GaussianState& initial, const GaussianState& final_state) {
    const Mat2 sum = initial.cov_opt() + final_state.cov_opt();
    const double det = sum.determinant();
    if (!(det > 0.0)) {
        throw degenerate_state_error("fidelity: det(V_i + V_f) <= 0");
    }
    const double root = std::sqrt(det);
    const Vec2 dxi = initial.mean_opt() - final_state.mean_opt();
    const double lambda_sq = dxi.dot(root * sum.inverse() * dxi);

    FidelityResult r;
    r.heating_quanta = 2.0 * root - 1.0;
    r.damping_parameter = std::sqrt(std::max(0.0, lambda_sq));
    r.fidelity = std::exp(-lambda_sq / (2.0 * root)) / (2.0 * root);
    return r;
}

FidelityResult protocol_fidelity(const PhysicalParams& p, const InputState& input,
                                 const ProtocolSpec& spec) {
    const GaussianState s0 = initial_state(input, p);
    const GaussianState raw = run_protocol(p, s0, spec);
    double theta = 0.0;
    const GaussianState compensated = rotate_compensate(raw, spec, p, &s0, &theta);
    FidelityResult r = fidelity(s0, compensated);
    r.rotation_angle = theta;
    return r;
}

}  // namespace omem
