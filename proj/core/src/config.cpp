#include "omem/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "omem/errors.hpp"
#include "omem/fixed_point.hpp"
#include "omem/presets.hpp"

namespace omem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

const std::array<const char*, 26> kKnownKeys = {
    "preset",  "frequency_convention", "omega_m", "kappa",   "gamma", "Qm",
    "g0",      "alpha_s",              "G",       "E_L",     "Delta0",
    "N_m",     "N_C",                  "T",       "Gamma_L", "gamma_c",
    "noise",   "tau",                  "t_s",     "alpha",   "r",
    "cooled",  "psi0",                 "rotation", "precool", "seed",
};

bool known_key(const std::string& key) {
    return std::find_if(kKnownKeys.begin(), kKnownKeys.end(),
                        [&](const char* k) { return key == k; }) != kKnownKeys.end();
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error("config: key '" + key + "': not a boolean: '" + v + "'");
}

std::complex<double> parse_complex(const std::string& v) {
    const auto comma = v.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(v), 0.0};
        return {std::stod(v.substr(0, comma)), std::stod(v.substr(comma + 1))};
    } catch (const std::exception&) {
        throw config_error("config: bad complex value '" + v + "' (want re[,im])");
    }
}

struct Suffix {
    const char* text;
    double factor;          // applied on top of the convention factor
    bool convention_scaled; // Hz family: angular x1, ordinary x2pi
};

// Longest-match table; empty suffix = dimensionless.
constexpr Suffix kSuffixes[] = {
    {"GHz", 1e9, true},   {"MHz", 1e6, true},   {"kHz", 1e3, true},  {"Hz", 1.0, true},
    {"Grad/s", 1e9, false}, {"Mrad/s", 1e6, false}, {"krad/s", 1e3, false},
    {"rad/s", 1.0, false},
    {"ns", 1e-9, false},  {"us", 1e-6, false},  {"ms", 1e-3, false}, {"s", 1.0, false},
    {"uK", 1e-6, false},  {"mK", 1e-3, false},  {"K", 1.0, false},
};

}  // namespace

FrequencyConvention parse_convention(const std::string& s) {
    if (s == "angular") return FrequencyConvention::Angular;
    if (s == "ordinary") return FrequencyConvention::Ordinary;
    throw config_error("config: frequency_convention must be 'angular' or 'ordinary', got '" +
                       s + "'");
}

std::string to_string(FrequencyConvention c) {
    return c == FrequencyConvention::Angular ? "angular" : "ordinary";
}

double parse_quantity(const std::string& text, FrequencyConvention convention) {
    const std::string t = trim(text);
    if (t.empty()) throw config_error("config: empty numeric value");

    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw config_error("config: not a number: '" + text + "'");
    }
    const std::string suffix = trim(t.substr(pos));
    if (suffix.empty()) return value;

    for (const Suffix& s : kSuffixes) {
        if (suffix == s.text) {
            double v = value * s.factor;
            if (s.convention_scaled && convention == FrequencyConvention::Ordinary) {
                v *= kTwoPi;
            }
            return v;
        }
    }
    throw config_error("config: unknown unit suffix '" + suffix + "' in '" + text + "'");
}

Settings Settings::from_text(const std::string& text, const std::string& origin) {
    Settings s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw config_error("config: " + where + ": expected 'key = value', got '" +
                               stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!known_key(key)) {
            throw config_error("config: " + where + ": unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw config_error("config: " + where + ": empty value for '" + key + "'");
        }
        s.entries_[key] = value;
    }
    return s;
}

Settings Settings::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str(), path);
}

void Settings::set(const std::string& key, const std::string& value) {
    if (!known_key(key)) throw config_error("config: unknown key '" + key + "'");
    entries_[key] = value;
}

bool Settings::has(const std::string& key) const { return entries_.count(key) != 0; }

const std::string& Settings::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw config_error("config: missing key '" + key + "'");
    return it->second;
}

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

namespace {

// Merge file and override maps; an override replaces the whole mutually
// exclusive group its key belongs to (e.g. --Qm on a config that set gamma).
std::map<std::string, std::string> merge_settings(const Settings& file,
                                                  const Settings& overrides) {
    static const std::vector<std::vector<std::string>> groups = {
        {"alpha_s", "G", "E_L", "Delta0"},
        {"gamma", "Qm"},
        {"N_m", "T"},
    };
    auto merged = file.entries();
    for (const auto& group : groups) {
        const bool overridden = std::any_of(group.begin(), group.end(), [&](const auto& k) {
            return overrides.has(k);
        });
        if (overridden) {
            for (const auto& k : group) merged.erase(k);
        }
    }
    for (const auto& [k, v] : overrides.entries()) merged[k] = v;
    return merged;
}

void check_exclusive(const std::map<std::string, std::string>& m, const char* a,
                     const char* b) {
    if (m.count(a) && m.count(b)) {
        throw config_error(std::string("config: '") + a + "' and '" + b +
                           "' are mutually exclusive");
    }
}

}  // namespace

Scenario Scenario::resolve(const Settings& file_settings, const Settings& overrides) {
    auto merged = merge_settings(file_settings, overrides);

    Scenario sc;
    if (auto it = merged.find("frequency_convention"); it != merged.end()) {
        sc.convention = parse_convention(it->second);
        merged.erase(it);
    }
    const auto conv = sc.convention;
    const auto quantity = [&](const std::string& key) {
        return parse_quantity(merged.at(key), conv);
    };

    if (auto it = merged.find("preset"); it != merged.end()) {
        const Preset* p = find_preset(it->second);
        if (!p) throw config_error("config: unknown preset '" + it->second + "'");
        sc.preset_name = p->name;
        sc.params = p->params;
        sc.input = p->input;
        sc.protocol = p->protocol;
        merged.erase(it);
    }

    check_exclusive(merged, "gamma", "Qm");
    check_exclusive(merged, "N_m", "T");
    check_exclusive(merged, "alpha_s", "G");
    check_exclusive(merged, "alpha_s", "E_L");
    check_exclusive(merged, "G", "E_L");
    if (merged.count("E_L") != merged.count("Delta0")) {
        throw config_error("config: the drive route needs both E_L and Delta0");
    }

    if (merged.count("omega_m")) sc.params.omega_m = quantity("omega_m");
    if (merged.count("kappa")) sc.params.kappa = quantity("kappa");
    if (merged.count("gamma")) sc.params.gamma = quantity("gamma");
    if (merged.count("Qm")) {
        const double qm = parse_quantity(merged.at("Qm"), conv);
        if (!(qm > 0.0)) throw config_error("config: Qm must be > 0");
        sc.params.gamma = sc.params.omega_m / qm;
    }
    if (merged.count("g0")) sc.params.g0 = quantity("g0");
    if (merged.count("N_m")) sc.params.n_mech = parse_quantity(merged.at("N_m"), conv);
    if (merged.count("N_C")) sc.params.n_cav = parse_quantity(merged.at("N_C"), conv);
    if (merged.count("T")) {
        sc.params.n_mech = thermal_occupation(quantity("T"), sc.params.omega_m);
    }

    if (merged.count("noise")) {
        const std::string& mode = merged.at("noise");
        if (mode == "colored") sc.params.noise.mode = NoiseMode::Colored;
        else if (mode == "white") sc.params.noise.mode = NoiseMode::WhiteExact;
        else if (mode == "none") sc.params.noise.mode = NoiseMode::NoNoise;
        else throw config_error("config: noise must be colored|white|none, got '" + mode + "'");
    }
    if (merged.count("Gamma_L")) {
        sc.params.noise.linewidth = quantity("Gamma_L");
        // Specifying a linewidth implies the colored model unless the mode
        // was given explicitly.
        if (!merged.count("noise") && sc.params.noise.mode == NoiseMode::NoNoise) {
            sc.params.noise.mode = NoiseMode::Colored;
        }
    }
    if (merged.count("gamma_c")) sc.params.noise.cutoff = quantity("gamma_c");

    if (merged.count("alpha_s")) sc.params.alpha_s = parse_quantity(merged.at("alpha_s"), conv);
    if (merged.count("G")) {
        const double g = quantity("G");
        if (g != 0.0 && !(sc.params.g0 > 0.0)) {
            throw config_error("config: G needs g0 > 0 to infer alpha_s");
        }
        sc.params.alpha_s = (g == 0.0) ? 0.0 : g / sc.params.g0;
    }
    if (merged.count("E_L")) {
        const auto roots = fixed_points(sc.params, quantity("E_L"), quantity("Delta0"));
        sc.params.alpha_s = std::abs(select_operating_point(roots).alpha);
    }

    if (merged.count("alpha")) sc.input.alpha = parse_complex(merged.at("alpha"));
    if (merged.count("r")) sc.input.squeezing = parse_quantity(merged.at("r"), conv);
    if (merged.count("cooled")) {
        sc.input.mechanical_cooled = parse_bool("cooled", merged.at("cooled"));
    }
    if (merged.count("psi0")) {
        const std::string& v = merged.at("psi0");
        if (v == "paper") sc.input.psi0_mode = PsiInitMode::PaperQuarter;
        else if (v == "stationary") sc.input.psi0_mode = PsiInitMode::Stationary;
        else throw config_error("config: psi0 must be paper|stationary, got '" + v + "'");
    }

    if (merged.count("tau")) sc.protocol.storage_time = quantity("tau");
    if (merged.count("t_s")) sc.protocol.pulse_duration = quantity("t_s");
    if (merged.count("rotation")) {
        const std::string& v = merged.at("rotation");
        if (v == "fixed") sc.protocol.rotation = RotationMode::FixedTotalTime;
        else if (v == "optimize") sc.protocol.rotation = RotationMode::NumericOptimize;
        else throw config_error("config: rotation must be fixed|optimize, got '" + v + "'");
    }
    if (merged.count("precool")) {
        sc.protocol.explicit_precool = parse_bool("precool", merged.at("precool"));
    }
    if (merged.count("seed")) {
        try {
            sc.seed = std::stoull(merged.at("seed"));
        } catch (const std::exception&) {
            throw config_error("config: bad seed '" + merged.at("seed") + "'");
        }
    }

    sc.params.validate();
    if (!sc.params.resolved_sideband()) {
        sc.warnings.push_back("kappa >= omega_m: outside the resolved-sideband regime "
                              "the swap protocol assumes");
    }
    if (sc.params.noise.mode == NoiseMode::Colored && sc.params.noise.linewidth > 0.0 &&
        sc.params.noise.cutoff == 0.0) {
        sc.warnings.push_back("Gamma_L > 0 with gamma_c = 0: zero-bandwidth colored "
                              "noise has no effect");
    }
    return sc;
}

std::string Scenario::dump() const {
    std::ostringstream out;
    const auto rate = [](double v) { return format_double(v) + " rad/s"; };
    out << "# omem scenario\n";
    if (!preset_name.empty()) out << "# derived from preset: " << preset_name << "\n";
    out << "frequency_convention = " << to_string(convention) << "\n";
    out << "omega_m = " << rate(params.omega_m) << "\n";
    out << "kappa = " << rate(params.kappa) << "\n";
    out << "gamma = " << rate(params.gamma) << "\n";
    out << "g0 = " << rate(params.g0) << "\n";
    out << "alpha_s = " << format_double(params.alpha_s) << "\n";
    out << "N_m = " << format_double(params.n_mech) << "\n";
    out << "N_C = " << format_double(params.n_cav) << "\n";
    const char* mode = params.noise.mode == NoiseMode::Colored      ? "colored"
                       : params.noise.mode == NoiseMode::WhiteExact ? "white"
                                                                    : "none";
    out << "noise = " << mode << "\n";
    out << "Gamma_L = " << rate(params.noise.linewidth) << "\n";
    out << "gamma_c = " << rate(params.noise.cutoff) << "\n";
    out << "alpha = " << format_double(input.alpha.real()) << ","
        << format_double(input.alpha.imag()) << "\n";
    out << "r = " << format_double(input.squeezing) << "\n";
    out << "cooled = " << (input.mechanical_cooled ? "true" : "false") << "\n";
    out << "psi0 = " << (input.psi0_mode == PsiInitMode::PaperQuarter ? "paper" : "stationary")
        << "\n";
    out << "tau = " << format_double(protocol.storage_time) << " s\n";
    if (protocol.pulse_duration > 0.0) {
        out << "t_s = " << format_double(protocol.pulse_duration) << " s\n";
    }
    out << "rotation = "
        << (protocol.rotation == RotationMode::FixedTotalTime ? "fixed" : "optimize") << "\n";
    out << "precool = " << (protocol.explicit_precool ? "true" : "false") << "\n";
    out << "seed = " << seed << "\n";
    return out.str();
}

std::vector<std::pair<std::string, std::string>> Scenario::summary() const {
    std::vector<std::pair<std::string, std::string>> kv;
    const auto g = [](double v) { return format_double(v, 12); };
    kv.emplace_back("preset", preset_name.empty() ? "(none)" : preset_name);
    kv.emplace_back("frequency_convention", to_string(convention));
    kv.emplace_back("omega_m_rad_s", g(params.omega_m));
    kv.emplace_back("kappa_rad_s", g(params.kappa));
    kv.emplace_back("gamma_rad_s", g(params.gamma));
    kv.emplace_back("Qm", g(params.gamma > 0 ? params.omega_m / params.gamma : 0.0));
    kv.emplace_back("g0_rad_s", g(params.g0));
    kv.emplace_back("alpha_s", g(params.alpha_s));
    kv.emplace_back("G_rad_s", g(params.coupling()));
    kv.emplace_back("N_m", g(params.n_mech));
    kv.emplace_back("N_C", g(params.n_cav));
    const char* mode = params.noise.mode == NoiseMode::Colored      ? "colored"
                       : params.noise.mode == NoiseMode::WhiteExact ? "white"
                                                                    : "none";
    kv.emplace_back("noise", mode);
    kv.emplace_back("Gamma_L_rad_s", g(params.noise.linewidth));
    kv.emplace_back("gamma_c_rad_s", g(params.noise.cutoff));
    kv.emplace_back("alpha", g(input.alpha.real()) + "," + g(input.alpha.imag()));
    kv.emplace_back("r", g(input.squeezing));
    kv.emplace_back("cooled", input.mechanical_cooled ? "true" : "false");
    kv.emplace_back("psi0",
                    input.psi0_mode == PsiInitMode::PaperQuarter ? "paper" : "stationary");
    const double ts = (params.coupling() > 0.0 || protocol.pulse_duration > 0.0)
                          ? protocol.resolved_pulse_duration(params)
                          : 0.0;
    kv.emplace_back("t_s_s", g(ts));
    kv.emplace_back("tau_s", g(protocol.storage_time));
    kv.emplace_back("rotation",
                    protocol.rotation == RotationMode::FixedTotalTime ? "fixed" : "optimize");
    kv.emplace_back("precool", protocol.explicit_precool ? "true" : "false");
    kv.emplace_back("seed", std::to_string(seed));
    return kv;
}

}  // namespace omem
