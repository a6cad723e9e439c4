#pragma once

#include <string>
#include <vector>

#include "omem/params.hpp"
#include "omem/protocol.hpp"

namespace omem {

// A shipped parameter bundle: physics, protocol timing, and input state.
struct Preset {
    std::string name;
    std::string description;
    PhysicalParams params;
    ProtocolSpec protocol;
    InputState input;
};

// Shipped presets:
//   teufel      microwave electromechanical cavity
//               (omega_m = 2pi*10.69 MHz, kappa = 2pi*170 kHz, G = 0.05 omega_m,
//                g0 = 2pi*230 Hz, Q_m = 360000, N_m = 3, tau = 64/omega_m)
//   groblacher  optomechanical Fabry-Perot cavity
//               (omega_m = 2pi*947 kHz, kappa = 2pi*215 kHz, gamma = 2pi*140 Hz,
//                g0 = 2pi*1.91 Hz, G = 2pi*229.81 kHz, N_m = 3, tau = 0.95 us)
// Both default to a coherent alpha = 1 input, cooled mechanical mode, and
// control noise switched off.
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace omem
