#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "omem/state.hpp"

namespace omem {

// Euler-Maruyama / exact-OU trajectory sampler used as an independent check
// of the deterministic moment engine.
//
// Randomness: trajectory i uses an mt19937_64 seeded from splitmix64 applied
// to (seed, i), normals by Box-Muller, draws in a fixed documented order
// (initial quadratures, psi0, then per step 4 quadrature increments followed
// by the psi increment). Serial and parallel runs are bit-identical.
struct TrajectoryConfig {
    double dt = 0.0;        // step (s)
    long n_steps = 0;       // used by ou_path; segment durations drive the SDE
    long n_traj = 0;        // >= 2
    std::uint64_t seed = 0;
    unsigned threads = 0;   // 0 = hardware concurrency

    void validate() const;
};

struct EmpiricalMoments {
    Vec4 mean = Vec4::Zero();
    Mat5 cov = Mat5::Zero();          // sample covariance of (x1,p1,x2,p2,psi)
    Vec4 stderr_mean = Vec4::Zero();
    Mat5 stderr_cov = Mat5::Zero();   // jackknife standard errors
    long n_traj = 0;
};

// Exact discretization of the OU frequency noise:
//   psi_{k+1} = psi_k e^{-gamma_c dt} + sqrt(Gamma_L gamma_c (1 - e^{-2 gamma_c dt})) xi_k
// psi_0 is drawn from N(0, psi0_variance); pass psi0_variance < 0 for the
// stationary value Gamma_L*gamma_c. Colored mode only: WhiteExact has no
// finite-rate sampler (use cutoff >> all rates instead).
std::vector<double> ou_path(const NoiseSpec& noise, double dt, long n_steps,
                            std::uint64_t seed, double psi0_variance = -1.0);

// Integrates the linearized quadrature Langevin equations through the given
// phase sequence, thermal/vacuum input noise moment-matched to the
// symmetrized correlators, the OU path entering p2 with coefficient
// -alpha_s during Write/Read. Initial quadratures (and psi) are drawn
// Gaussian from state0. Throws numerical_error when any |quadrature|
// exceeds 1e9 (step too large).
EmpiricalMoments simulate_trajectories(
    const PhysicalParams& p, const GaussianState& state0,
    std::span<const std::pair<CouplingPhase, double>> phase_sequence,
    const TrajectoryConfig& cfg);

// Largest Euler-Maruyama step that keeps dt <= 0.05 / max(scaled rates);
// callers warn when exceeding it.
double recommended_max_dt(const PhysicalParams& p);

// splitmix64; exposed because the substream rule (seed, index) is part of
// the reproducibility contract.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace omem
