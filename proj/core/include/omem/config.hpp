#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "omem/params.hpp"
#include "omem/protocol.hpp"

namespace omem {

// How Hz-family unit suffixes convert to the internal rad/s:
//   Angular:  "1kHz" -> 1000 rad/s      (calibrated default; reproduces the
//                                        shipped presets' reference fidelities)
//   Ordinary: "1kHz" -> 2*pi*1000 rad/s
// "rad/s"-family suffixes are convention-free. See docs/convention-calibration.md.
enum class FrequencyConvention { Angular, Ordinary };

FrequencyConvention parse_convention(const std::string& s);
std::string to_string(FrequencyConvention c);

// Parses "12.5", "1kHz", "0.5MHz", "2.1krad/s", "0.95us", "1.7mK", ...
// Frequencies return rad/s, times seconds, temperatures kelvin.
double parse_quantity(const std::string& text, FrequencyConvention convention);

// Flat key-value configuration: one `key = value` per line, '#' comments.
// Unknown keys are rejected with line diagnostics.
class Settings {
  public:
    static Settings from_file(const std::string& path);
    static Settings from_text(const std::string& text, const std::string& origin = "<string>");

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

// A fully resolved run: physics + input + protocol + reproducibility knobs.
struct Scenario {
    PhysicalParams params;
    InputState input;
    ProtocolSpec protocol;
    FrequencyConvention convention = FrequencyConvention::Angular;
    std::uint64_t seed = 1;
    std::string preset_name;            // empty when built from scratch
    std::vector<std::string> warnings;  // sideband / zero-bandwidth notices

    // Merge order: preset defaults, then config file, then overrides (CLI
    // flags). The coupling is given exactly one way: (g0, alpha_s), G with
    // alpha_s = G/g0, or (E_L, Delta0) routed through the fixed-point solve.
    static Scenario resolve(const Settings& file_settings, const Settings& overrides);

    // Serialization with explicit rad/s units and full precision; feeding the
    // dump back through resolve() reproduces identical results.
    std::string dump() const;

    // Effective parameters echoed to stdout and into CSV metadata.
    std::vector<std::pair<std::string, std::string>> summary() const;
};

// Shorthand "%.17g" / "%.12g" double formatting used for dumps and CSV.
std::string format_double(double v, int precision = 17);

}  // namespace omem
