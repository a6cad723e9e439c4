#include "omem/params.hpp"

#include <cmath>

#include "omem/errors.hpp"

namespace omem {

namespace {
constexpr double kHbar = 1.054571817e-34;  // J s
constexpr double kBoltzmann = 1.380649e-23;  // J/K
}  // namespace

double thermal_occupation(double temperature, double omega) {
    if (!(temperature > 0.0)) {
        throw config_error("thermal_occupation: temperature must be > 0 K");
    }
    if (!(omega > 0.0)) {
        throw config_error("thermal_occupation: frequency must be > 0 rad/s");
    }
    // 1/expm1 underflows cleanly to 0 in the T -> 0 limit.
    return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

void NoiseSpec::validate() const {
    if (linewidth < 0.0 || cutoff < 0.0) {
        throw config_error("noise: Gamma_L and gamma_c must be >= 0");
    }
    if (mode == NoiseMode::WhiteExact && cutoff != 0.0) {
        throw config_error(
            "noise: WhiteExact and a finite cutoff are mutually exclusive "
            "(the white limit already integrates the cutoff out)");
    }
}

void PhysicalParams::validate() const {
    if (!(omega_m > 0.0)) throw config_error("params: omega_m must be > 0");
    if (!(kappa > 0.0)) throw config_error("params: kappa must be > 0");
    if (gamma < 0.0) throw config_error("params: gamma must be >= 0");
    if (g0 < 0.0) throw config_error("params: g0 must be >= 0");
    if (alpha_s < 0.0) throw config_error("params: alpha_s must be >= 0");
    if (n_mech < 0.0 || n_cav < 0.0) {
        throw config_error("params: occupancies must be >= 0");
    }
    noise.validate();
}

PhysicalParams PhysicalParams::scaled() const {
    PhysicalParams s = *this;
    const double w = omega_m;
    s.omega_m = 1.0;
    s.kappa = kappa / w;
    s.gamma = gamma / w;
    s.g0 = g0 / w;
    s.noise.linewidth = noise.linewidth / w;
    s.noise.cutoff = noise.cutoff / w;
    return s;
}

PhysicalParams PhysicalParams::from_coupling(double omega_m, double kappa, double gamma,
                                             double g0, double G, double n_mech,
                                             double n_cav, NoiseSpec noise) {
    if (G != 0.0 && g0 <= 0.0) {
        throw config_error("params: coupling G requires g0 > 0 to infer alpha_s");
    }
    PhysicalParams p;
    p.omega_m = omega_m;
    p.kappa = kappa;
    p.gamma = gamma;
    p.g0 = g0;
    p.alpha_s = (G == 0.0) ? 0.0 : G / g0;
    p.n_mech = n_mech;
    p.n_cav = n_cav;
    p.noise = noise;
    return p;
}

}  // namespace omem
