#include "omem/montecarlo.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "omem/drift.hpp"
#include "omem/errors.hpp"

namespace omem {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0xA5A5A5A55A5A5A5Aull + index * 0x9E3779B97F4A7C15ull);
    std::uint64_t mixed = splitmix64(s);
    mixed ^= splitmix64(s);
    return mixed;
}

namespace {

// Box-Muller over mt19937_64; a fixed algorithm keeps seeded runs
// bit-identical across standard libraries.
class NormalSource {
  public:
    explicit NormalSource(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;          // [0,1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Square root of a PSD matrix for sampling initial quadratures; tolerates
// the zero eigenvalues of deterministic test states.
Mat4 psd_sqrt(const Mat4& m) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(m);
    Vec4 lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

void TrajectoryConfig::validate() const {
    if (!(dt > 0.0)) throw config_error("trajectories: dt must be > 0");
    if (n_traj < 2) throw config_error("trajectories: n_traj must be >= 2");
}

double recommended_max_dt(const PhysicalParams& p) {
    const double fastest = std::max({p.omega_m, p.kappa, p.gamma, p.coupling(),
                                     p.noise.cutoff});
    return 0.05 / fastest;
}

std::vector<double> ou_path(const NoiseSpec& noise, double dt, long n_steps,
                            std::uint64_t seed, double psi0_variance) {
    if (noise.mode == NoiseMode::WhiteExact) {
        throw config_error("ou_path: no finite-rate sampler for WhiteExact; "
                           "use a cutoff far above every system rate instead");
    }
    if (!(dt > 0.0)) throw config_error("ou_path: dt must be > 0");
    if (n_steps < 0) throw config_error("ou_path: n_steps must be >= 0");

    const double stationary = noise.linewidth * noise.cutoff;
    const double var0 = (psi0_variance < 0.0) ? stationary : psi0_variance;
    const double decay = std::exp(-noise.cutoff * dt);
    const double kick = std::sqrt(std::max(0.0, stationary * (1.0 - decay * decay)));

    NormalSource normal(substream_seed(seed, 0));
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(n_steps) + 1);
    double psi = std::sqrt(std::max(0.0, var0)) * normal();
    path.push_back(psi);
    for (long k = 0; k < n_steps; ++k) {
        psi = psi * decay + kick * normal();
        path.push_back(psi);
    }
    return path;
}

EmpiricalMoments simulate_trajectories(
    const PhysicalParams& p, const GaussianState& state0,
    std::span<const std::pair<CouplingPhase, double>> phase_sequence,
    const TrajectoryConfig& cfg) {
    p.validate();
    cfg.validate();
    if (p.noise.mode == NoiseMode::WhiteExact) {
        throw config_error("trajectories: WhiteExact has no finite-rate sampler");
    }

    const double w = p.omega_m;
    const PhysicalParams sp = p.scaled();
    const double dt_scaled = cfg.dt * w;

    struct Segment {
        Mat4 drift;
        double h = 0.0;
        long steps = 0;
        bool laser_on = false;
        double sigma[4] = {0, 0, 0, 0};  // per-step quadrature kicks
        double ou_decay = 1.0;
        double ou_kick = 0.0;
    };
    const Mat5 diffusion = diffusion_matrix(sp);
    std::vector<Segment> segments;
    for (const auto& [phase, duration] : phase_sequence) {
        if (duration < 0.0) throw config_error("trajectories: negative segment duration");
        Segment seg;
        const double t_scaled = duration * w;
        seg.steps = (t_scaled == 0.0)
                        ? 0
                        : std::max<long>(1, static_cast<long>(std::ceil(t_scaled / dt_scaled)));
        seg.h = (seg.steps > 0) ? t_scaled / static_cast<double>(seg.steps) : 0.0;
        seg.drift = drift_matrix_mean(sp, phase);
        seg.laser_on = phase != CouplingPhase::Store;
        for (int i = 0; i < 4; ++i) seg.sigma[i] = std::sqrt(diffusion(i, i) * seg.h);
        seg.ou_decay = std::exp(-sp.noise.cutoff * seg.h);
        // The frequency-noise process is driven only while the laser is on.
        const double stationary = sp.noise.linewidth * sp.noise.cutoff;
        seg.ou_kick = seg.laser_on
                          ? std::sqrt(std::max(0.0, stationary * (1.0 - seg.ou_decay * seg.ou_decay)))
                          : 0.0;
        segments.push_back(seg);
    }

    const Mat4 sqrt_cov = psd_sqrt(state0.cov_physical());
    const double psi0_sd = std::sqrt(std::max(0.0, state0.cov(kPsi, kPsi)));
    const double alpha_s = sp.alpha_s;

    const long n = cfg.n_traj;
    std::vector<Vec5> samples(static_cast<std::size_t>(n));
    std::atomic<bool> blown_up{false};

    const auto run_one = [&](long idx) {
        NormalSource normal(substream_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
        Vec4 xi;
        for (int i = 0; i < 4; ++i) xi(i) = normal();
        Vec4 x = state0.mean + sqrt_cov * xi;
        double psi = psi0_sd * normal();

        for (const Segment& seg : segments) {
            for (long k = 0; k < seg.steps; ++k) {
                Vec4 drift = seg.drift * x;
                if (seg.laser_on) drift(kP2) -= alpha_s * psi;
                x += seg.h * drift;
                for (int i = 0; i < 4; ++i) x(i) += seg.sigma[i] * normal();
                psi = psi * seg.ou_decay + seg.ou_kick * normal();
                if (x.cwiseAbs().maxCoeff() > 1e9) {
                    blown_up.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        }
        samples[static_cast<std::size_t>(idx)] << x(0), x(1), x(2), x(3), psi;
    };

    unsigned threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        for (long i = 0; i < n && !blown_up; ++i) run_one(i);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (long i = next.fetch_add(1); i < n && !blown_up; i = next.fetch_add(1)) {
                    run_one(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    if (blown_up) {
        throw numerical_error("trajectories: quadrature exceeded 1e9; reduce dt");
    }

    // Moments; reduction is a serial loop over the per-trajectory samples,
    // so thread count cannot change the result.
    Vec5 sum = Vec5::Zero();
    Mat5 sum_outer = Mat5::Zero();
    for (const Vec5& v : samples) {
        sum += v;
        sum_outer += v * v.transpose();
    }
    const double dn = static_cast<double>(n);
    const Vec5 mean5 = sum / dn;
    const Mat5 cov = (sum_outer - dn * mean5 * mean5.transpose()) / (dn - 1.0);

    EmpiricalMoments m;
    m.n_traj = n;
    m.mean = mean5.head<4>();
    m.cov = ((cov + cov.transpose()) / 2.0).eval();
    for (int i = 0; i < 4; ++i) m.stderr_mean(i) = std::sqrt(std::max(0.0, cov(i, i)) / dn);

    // Jackknife over trajectories for the covariance entries.
    Mat5 jk_sum = Mat5::Zero();
    Mat5 jk_sumsq = Mat5::Zero();
    const double dm = dn - 1.0;
    for (const Vec5& v : samples) {
        const Vec5 mean_i = (sum - v) / dm;
        const Mat5 m2_i = sum_outer - v * v.transpose();
        const Mat5 cov_i = (m2_i - dm * mean_i * mean_i.transpose()) / (dm - 1.0);
        jk_sum += cov_i;
        jk_sumsq += cov_i.cwiseProduct(cov_i);
    }
    const Mat5 jk_mean = jk_sum / dn;
    const Mat5 jk_var = (jk_sumsq / dn - jk_mean.cwiseProduct(jk_mean)).cwiseMax(0.0);
    m.stderr_cov = (dm * jk_var).cwiseSqrt();  // se^2 = (n-1)/n * sum (theta_i - mean)^2
    return m;
}

}  // namespace omem
