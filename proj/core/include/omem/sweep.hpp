#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "omem/config.hpp"

namespace omem {

enum class SweepAxis {
    Qm,           // mechanical quality factor; gamma = omega_m/Q_m, omega_m fixed
    GammaL,       // control linewidth (rad/s)
    GammaC,       // frequency-noise cutoff (rad/s)
    Coupling,     // G (rad/s); alpha_s follows as G/g0, t_s as pi/(2G)
    StorageTime,  // tau (s)
    Squeezing,    // r
    Temperature,  // T (K); N_m follows via the Bose factor
};

SweepAxis parse_axis(const std::string& s);
std::string to_string(SweepAxis axis);

struct SweepSpec {
    SweepAxis axis = SweepAxis::Qm;
    double start = 0.0;  // internal units (rad/s, s, K, dimensionless)
    double stop = 0.0;
    int points = 0;      // >= 2
    bool log_spacing = false;
    std::map<std::string, std::string> overrides;  // applied before sweeping
    std::string label;                             // curve tag in the CSV

    void validate() const;
    std::vector<double> grid() const;
};

struct ResultRow {
    std::string label;
    std::string axis;
    double axis_value = 0.0;
    FidelityResult result;
    double pulse_duration = 0.0;  // effective t_s (s)
    double storage_time = 0.0;    // effective tau (s)
    Scenario scenario;            // effective parameters for this point
    std::string error;            // empty on success; row kept either way
};

// Evaluates the sweep point-by-point in a shared-counter parallel map
// (engine calls are pure); rows come back in axis order regardless of
// completion order. Per-point failures land in ResultRow::error and the
// sweep continues.
std::vector<ResultRow> run_sweep(const Scenario& base, const SweepSpec& sweep,
                                 unsigned threads = 0);

// CSV emission: '#'-prefixed metadata echoing every effective base
// parameter, then a stable header row, then one row per point. Repeated
// runs with identical configuration are byte-identical.
void write_sweep_csv(std::ostream& out, const Scenario& base,
                     const std::vector<ResultRow>& rows);
const char* sweep_csv_header();

// Canned figure bundles ("fig3", "fig4a", "fig4b", "fig5", "fig6a",
// "fig6b", "fig7a", "fig7b", "fig8"): the preset plus the sweeps for every
// curve in that figure. Throws config_error for unknown ids.
struct FigureBundle {
    std::string preset;
    std::vector<SweepSpec> sweeps;
};
FigureBundle figure_bundle(const std::string& id);
std::vector<std::string> figure_ids();

}  // namespace omem
