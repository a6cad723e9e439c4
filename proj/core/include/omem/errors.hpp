#pragma once

#include <stdexcept>
#include <string>

namespace omem {

// Exit-code mapping used by the CLI: config 2, instability 3, numerical 4.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No stable fixed point exists for the requested drive.
struct instability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Blow-up, non-finite input, or a propagation step failure.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// det(V_i + V_f) <= 0; cannot happen for physical states.
struct degenerate_state_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace omem
