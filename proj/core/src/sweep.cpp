#include "omem/sweep.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include "omem/errors.hpp"
#include "omem/presets.hpp"

namespace omem {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SweepAxis parse_axis(const std::string& s) {
    if (s == "Qm") return SweepAxis::Qm;
    if (s == "GammaL") return SweepAxis::GammaL;
    if (s == "gamma_c") return SweepAxis::GammaC;
    if (s == "G") return SweepAxis::Coupling;
    if (s == "tau") return SweepAxis::StorageTime;
    if (s == "r") return SweepAxis::Squeezing;
    if (s == "T") return SweepAxis::Temperature;
    throw config_error("sweep: unknown axis '" + s +
                       "' (want Qm|GammaL|gamma_c|G|tau|r|T)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Qm: return "Qm";
        case SweepAxis::GammaL: return "GammaL";
        case SweepAxis::GammaC: return "gamma_c";
        case SweepAxis::Coupling: return "G";
        case SweepAxis::StorageTime: return "tau";
        case SweepAxis::Squeezing: return "r";
        case SweepAxis::Temperature: return "T";
    }
    throw config_error("sweep: bad axis");
}

void SweepSpec::validate() const {
    if (points < 2) throw config_error("sweep: points must be >= 2");
    if (!(start < stop)) throw config_error("sweep: start must be < stop");
    if (log_spacing && !(start > 0.0)) {
        throw config_error("sweep: log spacing needs start > 0");
    }
}

std::vector<double> SweepSpec::grid() const {
    validate();
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        g[static_cast<std::size_t>(i)] =
            log_spacing ? start * std::pow(stop / start, f) : start + f * (stop - start);
    }
    return g;
}

namespace {

void apply_axis(Scenario& sc, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::Qm:
            if (!(value > 0.0)) throw config_error("sweep: Qm must be > 0");
            sc.params.gamma = sc.params.omega_m / value;  // omega_m stays fixed
            return;
        case SweepAxis::GammaL:
            sc.params.noise.linewidth = value;
            if (value > 0.0 && sc.params.noise.mode == NoiseMode::NoNoise) {
                sc.params.noise.mode = NoiseMode::Colored;
            }
            return;
        case SweepAxis::GammaC:
            sc.params.noise.cutoff = value;
            return;
        case SweepAxis::Coupling:
            if (!(sc.params.g0 > 0.0)) throw config_error("sweep: G axis needs g0 > 0");
            sc.params.alpha_s = value / sc.params.g0;
            return;
        case SweepAxis::StorageTime:
            if (value < 0.0) throw config_error("sweep: tau must be >= 0");
            sc.protocol.storage_time = value;
            return;
        case SweepAxis::Squeezing:
            sc.input.squeezing = value;
            return;
        case SweepAxis::Temperature:
            sc.params.n_mech = thermal_occupation(value, sc.params.omega_m);
            return;
    }
    throw config_error("sweep: bad axis");
}

}  // namespace

std::vector<ResultRow> run_sweep(const Scenario& base, const SweepSpec& sweep,
                                 unsigned threads) {
    sweep.validate();

    Scenario curve_base = base;
    if (!sweep.overrides.empty()) {
        Settings ov;
        for (const auto& [k, v] : sweep.overrides) ov.set(k, v);
        curve_base = Scenario::resolve(Settings::from_text(base.dump()), ov);
    }

    const auto grid = sweep.grid();
    std::vector<ResultRow> rows(grid.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
            ResultRow& row = rows[i];
            row.label = sweep.label;
            row.axis = to_string(sweep.axis);
            row.axis_value = grid[i];
            row.scenario = curve_base;
            try {
                apply_axis(row.scenario, sweep.axis, grid[i]);
                row.scenario.params.validate();
                row.result = protocol_fidelity(row.scenario.params, row.scenario.input,
                                               row.scenario.protocol);
                row.pulse_duration =
                    row.scenario.protocol.resolved_pulse_duration(row.scenario.params);
                row.storage_time = row.scenario.protocol.storage_time;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };

    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(grid.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

const char* sweep_csv_header() {
    return "label,axis,axis_value,F,n_h,lambda,theta,t_s,tau,omega_m,kappa,gamma,g0,"
           "alpha_s,G,N_m,N_C,noise,Gamma_L,gamma_c,alpha_re,alpha_im,r,cooled,psi0,"
           "rotation,error";
}

void write_sweep_csv(std::ostream& out, const Scenario& base,
                     const std::vector<ResultRow>& rows) {
    out << "# omem sweep results\n";
    for (const auto& [k, v] : base.summary()) out << "# " << k << " = " << v << "\n";
    out << sweep_csv_header() << "\n";
    const auto g = [](double v) { return format_double(v, 12); };
    for (const ResultRow& r : rows) {
        const PhysicalParams& p = r.scenario.params;
        const char* mode = p.noise.mode == NoiseMode::Colored      ? "colored"
                           : p.noise.mode == NoiseMode::WhiteExact ? "white"
                                                                   : "none";
        out << r.label << ',' << r.axis << ',' << g(r.axis_value) << ','
            << g(r.result.fidelity) << ',' << g(r.result.heating_quanta) << ','
            << g(r.result.damping_parameter) << ',' << g(r.result.rotation_angle) << ','
            << g(r.pulse_duration) << ',' << g(r.storage_time) << ',' << g(p.omega_m) << ','
            << g(p.kappa) << ',' << g(p.gamma) << ',' << g(p.g0) << ',' << g(p.alpha_s) << ','
            << g(p.coupling()) << ',' << g(p.n_mech) << ',' << g(p.n_cav) << ',' << mode << ','
            << g(p.noise.linewidth) << ',' << g(p.noise.cutoff) << ','
            << g(r.scenario.input.alpha.real()) << ',' << g(r.scenario.input.alpha.imag())
            << ',' << g(r.scenario.input.squeezing) << ','
            << (r.scenario.input.mechanical_cooled ? "true" : "false") << ','
            << (r.scenario.input.psi0_mode == PsiInitMode::PaperQuarter ? "paper"
                                                                        : "stationary")
            << ','
            << (r.scenario.protocol.rotation == RotationMode::FixedTotalTime ? "fixed"
                                                                             : "optimize")
            << ',' << r.error << "\n";
    }
}

namespace {

SweepSpec noise_curve(SweepSpec base, const std::string& label, double linewidth,
                      double cutoff) {
    base.label = label;
    if (linewidth == 0.0) {
        base.overrides["noise"] = "none";
    } else {
        base.overrides["Gamma_L"] = format_double(linewidth) + " rad/s";
        base.overrides["gamma_c"] = format_double(cutoff) + " rad/s";
        base.overrides["noise"] = "colored";
    }
    return base;
}

}  // namespace

FigureBundle figure_bundle(const std::string& id) {
    const double wm_mw = kTwoPi * 10.69e6;  // teufel mechanical frequency

    FigureBundle b;
    if (id == "fig3") {
        b.preset = "teufel";
        SweepSpec s{SweepAxis::Qm, 1e3, 1e6, 31, true, {}, ""};
        b.sweeps = {
            noise_curve(s, "GL=0", 0.0, 0.0),
            noise_curve(s, "GL=1kHz,gc=100kHz", 1e3, 1e5),
            noise_curve(s, "GL=1kHz,gc=0.5MHz", 1e3, 5e5),
            noise_curve(s, "GL=1kHz,gc=10MHz", 1e3, 1e7),
        };
    } else if (id == "fig4a") {
        b.preset = "teufel";
        SweepSpec s{SweepAxis::GammaL, 0.0, 1e4, 21, false, {}, "gc=0.5MHz"};
        s.overrides["gamma_c"] = "500000 rad/s";
        b.sweeps = {s};
    } else if (id == "fig4b") {
        b.preset = "teufel";
        SweepSpec s{SweepAxis::GammaC, 1e3, 1e7, 25, true, {}, ""};
        for (double gl : {1e3, 5e3, 1e4}) {
            SweepSpec c = s;
            c.label = "GL=" + format_double(gl / 1e3, 3) + "kHz";
            c.overrides["Gamma_L"] = format_double(gl) + " rad/s";
            b.sweeps.push_back(c);
        }
    } else if (id == "fig5") {
        b.preset = "teufel";
        SweepSpec s{SweepAxis::StorageTime, 1e-6, 4e-4, 25, true, {}, ""};
        SweepSpec cold_off = noise_curve(s, "T=1.7mK,GL=0", 0.0, 0.0);
        cold_off.overrides["T"] = "1.7mK";
        SweepSpec cold_on = noise_curve(s, "T=1.7mK,GL=1kHz,gc=300kHz", 1e3, 3e5);
        cold_on.overrides["T"] = "1.7mK";
        SweepSpec hot_off = noise_curve(s, "T=0.01K,GL=0", 0.0, 0.0);
        hot_off.overrides["T"] = "0.01K";
        SweepSpec hot_on = noise_curve(s, "T=0.01K,GL=1kHz,gc=300kHz", 1e3, 3e5);
        hot_on.overrides["T"] = "0.01K";
        b.sweeps = {cold_off, cold_on, hot_off, hot_on};
    } else if (id == "fig6a" || id == "fig6b") {
        b.preset = "teufel";
        const bool wide = id == "fig6b";
        SweepSpec s{SweepAxis::Coupling, 0.02 * wm_mw, wide ? wm_mw : 0.05 * wm_mw,
                    wide ? 41 : 16, wide, {}, ""};
        b.sweeps = {
            noise_curve(s, "GL=0", 0.0, 0.0),
            noise_curve(s, "GL=1kHz,gc=100kHz", 1e3, 1e5),
            noise_curve(s, "GL=1kHz,gc=200kHz", 1e3, 2e5),
            noise_curve(s, "GL=1kHz,gc=300kHz", 1e3, 3e5),
        };
    } else if (id == "fig7a") {
        b.preset = "teufel";
        SweepSpec s{SweepAxis::Qm, 1e3, 1e6, 31, true, {}, ""};
        s.overrides["Gamma_L"] = "1000 rad/s";
        s.overrides["gamma_c"] = "10000 rad/s";
        s.overrides["tau"] = "0.95us";
        for (double r : {0.0, 0.2, 0.5, 0.8}) {
            SweepSpec c = s;
            c.label = "r=" + format_double(r, 3);
            c.overrides["r"] = format_double(r);
            b.sweeps.push_back(c);
        }
    } else if (id == "fig7b") {
        b.preset = "teufel";
        SweepSpec s{SweepAxis::Squeezing, 0.0, 0.8, 17, false, {}, "Qm=360000"};
        s.overrides["Gamma_L"] = "1000 rad/s";
        s.overrides["gamma_c"] = "10000 rad/s";
        s.overrides["tau"] = "0.95us";
        b.sweeps = {s};
    } else if (id == "fig8") {
        b.preset = "groblacher";
        SweepSpec s{SweepAxis::Qm, 1e3, 1e6, 31, true, {}, ""};
        b.sweeps = {
            noise_curve(s, "GL=0", 0.0, 0.0),
            noise_curve(s, "GL=1kHz,gc=0.5kHz", 1e3, 0.5e3),
            noise_curve(s, "GL=1kHz,gc=1kHz", 1e3, 1e3),
        };
    } else {
        throw config_error("sweep: unknown figure id '" + id + "'");
    }
    return b;
}

std::vector<std::string> figure_ids() {
    return {"fig3", "fig4a", "fig4b", "fig5", "fig6a", "fig6b", "fig7a", "fig7b", "fig8"};
}

}  // namespace omem
