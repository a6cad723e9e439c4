#include "omem/presets.hpp"

#include <numbers>

namespace omem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Preset make_teufel() {
    Preset p;
    p.name = "teufel";
    p.description = "microwave electromechanical cavity, strong coherent coupling";
    const double omega_m = kTwoPi * 10.69e6;
    p.params = PhysicalParams::from_coupling(
        /*omega_m=*/omega_m,
        /*kappa=*/kTwoPi * 170e3,
        /*gamma=*/omega_m / 360000.0,  // Q_m = 360000
        /*g0=*/kTwoPi * 230.0,
        /*G=*/0.05 * omega_m,
        /*n_mech=*/3.0,
        /*n_cav=*/0.0);
    p.params.noise.mode = NoiseMode::Colored;
    p.protocol.storage_time = 64.0 / omega_m;
    p.input.alpha = {1.0, 0.0};
    return p;
}

Preset make_groblacher() {
    Preset p;
    p.name = "groblacher";
    p.description = "optomechanical Fabry-Perot cavity, strong coupling";
    p.params = PhysicalParams::from_coupling(
        /*omega_m=*/kTwoPi * 947e3,
        /*kappa=*/kTwoPi * 215e3,
        /*gamma=*/kTwoPi * 140.0,
        /*g0=*/kTwoPi * 1.91,
        /*G=*/kTwoPi * 229.81e3,
        /*n_mech=*/3.0,
        /*n_cav=*/0.0);
    p.params.noise.mode = NoiseMode::Colored;
    p.protocol.storage_time = 0.95e-6;
    p.input.alpha = {1.0, 0.0};
    return p;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = {make_teufel(), make_groblacher()};
    return all;
}

const Preset* find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

}  // namespace omem
