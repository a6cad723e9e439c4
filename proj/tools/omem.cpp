// omem — storage-fidelity simulator for opto/electromechanical quantum
// memories under colored control-laser phase noise.
//
// Subcommands: fidelity, sweep, montecarlo, presets, dump-config.
// Exit codes: 0 ok, 2 configuration, 3 unstable operating point,
// 4 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "omem/config.hpp"
#include "omem/errors.hpp"
#include "omem/montecarlo.hpp"
#include "omem/presets.hpp"
#include "omem/propagate.hpp"
#include "omem/protocol.hpp"
#include "omem/sweep.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::vector<std::pair<std::string, std::string>> overrides;
};

// Registers the shared flags on a subcommand; values land in `args` as raw
// strings and go through the normal settings pipeline.
void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key = value configuration file");
    const auto keyed = [&args](const std::string& key) {
        return [&args, key](const std::string& v) {
            args.overrides.emplace_back(key, v);
        };
    };
    cmd->add_option_function<std::string>("--preset", keyed("preset"),
                                          "parameter preset (see `omem presets`)");
    cmd->add_option_function<std::string>("--GammaL", keyed("Gamma_L"),
                                          "control linewidth, e.g. 1kHz or 1000rad/s");
    cmd->add_option_function<std::string>("--gammac", keyed("gamma_c"),
                                          "frequency-noise cutoff");
    cmd->add_option_function<std::string>("--alpha", keyed("alpha"),
                                          "input displacement re[,im]");
    cmd->add_option_function<std::string>("--r", keyed("r"), "squeezing parameter");
    cmd->add_option_function<std::string>("--tau", keyed("tau"), "storage time, e.g. 0.95us");
    cmd->add_option_function<std::string>("--Qm", keyed("Qm"),
                                          "mechanical quality factor (sets gamma)");
    cmd->add_option_function<std::string>("--G", keyed("G"),
                                          "coupling rate (sets alpha_s = G/g0)");
    cmd->add_option_function<std::string>("--seed", keyed("seed"), "RNG seed");
    cmd->add_option_function<std::string>("--frequency-convention",
                                          keyed("frequency_convention"),
                                          "angular (default) or ordinary");
    cmd->add_option_function<std::string>("--psi0", keyed("psi0"),
                                          "initial frequency-noise variance: paper|stationary");
    cmd->add_option_function<std::string>("--rotation", keyed("rotation"),
                                          "compensation: fixed|optimize");
    cmd->add_option_function<std::vector<std::string>>(
        "--set",
        [&args](const std::vector<std::string>& vals) {
            for (const auto& v : vals) {
                const auto eq = v.find('=');
                if (eq == std::string::npos) {
                    throw CLI::ValidationError("--set", "expected key=value");
                }
                args.overrides.emplace_back(v.substr(0, eq), v.substr(eq + 1));
            }
        },
        "extra key=value override (repeatable)");
}

omem::Scenario resolve_scenario(const CommonArgs& args) {
    omem::Settings file;
    if (!args.config_path.empty()) file = omem::Settings::from_file(args.config_path);
    omem::Settings ov;
    for (const auto& [k, v] : args.overrides) ov.set(k, v);
    omem::Scenario sc = omem::Scenario::resolve(file, ov);
    for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
    return sc;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw omem::config_error("cannot open output file '" + path + "'");
    return out;
}

int cmd_fidelity(const CommonArgs& args) {
    const omem::Scenario sc = resolve_scenario(args);
    const omem::FidelityResult r =
        omem::protocol_fidelity(sc.params, sc.input, sc.protocol);

    std::printf("F = %.6f\n", r.fidelity);
    std::printf("n_h = %.6g\n", r.heating_quanta);
    std::printf("lambda = %.6g\n", r.damping_parameter);
    std::printf("theta = %.6g rad\n", r.rotation_angle);
    if (r.fidelity < 0.5) {
        std::printf("note: fidelity below 0.5; the retrieved state is closer to "
                    "a thermal state than to the input\n");
    }
    std::printf("# effective parameters\n");
    for (const auto& [k, v] : sc.summary()) std::printf("#   %s = %s\n", k.c_str(), v.c_str());

    if (!args.out_path.empty()) {
        omem::ResultRow row;
        row.axis = "point";
        row.result = r;
        row.scenario = sc;
        row.pulse_duration = sc.protocol.resolved_pulse_duration(sc.params);
        row.storage_time = sc.protocol.storage_time;
        auto out = open_out(args.out_path);
        omem::write_sweep_csv(out, sc, {row});
    }
    return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& figure, const std::string& axis,
              const std::string& start, const std::string& stop, int points, bool log_spacing,
              unsigned threads) {
    std::vector<omem::ResultRow> rows;
    omem::Scenario base;

    if (!figure.empty()) {
        const omem::FigureBundle bundle = omem::figure_bundle(figure);
        CommonArgs with_preset = args;
        // figure presets yield to an explicit --preset
        const bool user_preset =
            std::any_of(args.overrides.begin(), args.overrides.end(),
                        [](const auto& kv) { return kv.first == "preset"; });
        if (!user_preset) {
            with_preset.overrides.emplace_back("preset", bundle.preset);
        }
        base = resolve_scenario(with_preset);
        for (const auto& sweep : bundle.sweeps) {
            auto part = omem::run_sweep(base, sweep, threads);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    } else {
        if (axis.empty() || start.empty() || stop.empty() || points == 0) {
            throw omem::config_error(
                "sweep: need --figure, or --axis with --start/--stop/--points");
        }
        base = resolve_scenario(args);
        omem::SweepSpec spec;
        spec.axis = omem::parse_axis(axis);
        spec.start = omem::parse_quantity(start, base.convention);
        spec.stop = omem::parse_quantity(stop, base.convention);
        spec.points = points;
        spec.log_spacing = log_spacing;
        rows = omem::run_sweep(base, spec, threads);
    }

    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
    if (failed > 0) {
        std::cerr << "warning: " << failed << "/" << rows.size()
                  << " sweep points failed; see the error column\n";
    }

    if (args.out_path.empty()) {
        omem::write_sweep_csv(std::cout, base, rows);
    } else {
        auto out = open_out(args.out_path);
        omem::write_sweep_csv(out, base, rows);
        std::printf("wrote %zu rows to %s\n", rows.size(), args.out_path.c_str());
    }
    return 0;
}

int cmd_montecarlo(const CommonArgs& args, long n_traj, const std::string& dt_text,
                   bool full_protocol, unsigned threads) {
    const omem::Scenario sc = resolve_scenario(args);
    const omem::PhysicalParams& p = sc.params;
    const double ts = sc.protocol.resolved_pulse_duration(p);

    omem::TrajectoryConfig cfg;
    cfg.n_traj = n_traj;
    cfg.seed = sc.seed;
    cfg.threads = threads;
    cfg.dt = dt_text.empty() ? 1e-3 / p.omega_m
                             : omem::parse_quantity(dt_text, sc.convention);
    if (cfg.dt > omem::recommended_max_dt(p)) {
        std::cerr << "warning: dt = " << omem::format_double(cfg.dt, 6)
                  << " s exceeds the recommended maximum "
                  << omem::format_double(omem::recommended_max_dt(p), 6) << " s\n";
    }

    std::vector<std::pair<omem::CouplingPhase, double>> phases = {
        {omem::CouplingPhase::Write, ts}};
    if (full_protocol) {
        phases.emplace_back(omem::CouplingPhase::Store, sc.protocol.storage_time);
        phases.emplace_back(omem::CouplingPhase::Read, ts);
    }

    // Deterministic reference over the same phase sequence.
    const omem::PhysicalParams sp = p.scaled();
    omem::GaussianState det = omem::initial_state(sc.input, p);
    const omem::GaussianState s0 = det;
    for (const auto& [phase, duration] : phases) {
        const omem::Mat5 q = omem::drift_matrix(sp, phase);
        omem::Mat5 n = omem::diffusion_matrix(sp);
        if (phase == omem::CouplingPhase::Store) n(omem::kPsi, omem::kPsi) = 0.0;
        const double t_scaled = duration * p.omega_m;
        omem::GaussianState next = omem::propagate_cov_analytic(det, q, n, t_scaled);
        next.mean = omem::propagate_mean(det, q.topLeftCorner<4, 4>(), t_scaled, 0.0).mean;
        det = next;
    }

    const omem::EmpiricalMoments mc = omem::simulate_trajectories(p, s0, phases, cfg);

    const char* names[5] = {"x1", "p1", "x2", "p2", "psi"};
    std::printf("%-10s %16s %16s %12s %8s\n", "moment", "deterministic", "empirical",
                "stderr", "z");
    double worst_z = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double z = (mc.mean(i) - det.mean(i)) / mc.stderr_mean(i);
        worst_z = std::max(worst_z, std::abs(z));
        std::printf("<%s>%-6s %16.8g %16.8g %12.3g %8.2f\n", names[i], "", det.mean(i),
                    mc.mean(i), mc.stderr_mean(i), z);
    }
    for (int i = 0; i < 5; ++i) {
        for (int j = i; j < 5; ++j) {
            if (mc.stderr_cov(i, j) == 0.0) continue;
            const double z = (mc.cov(i, j) - det.cov(i, j)) / mc.stderr_cov(i, j);
            worst_z = std::max(worst_z, std::abs(z));
            std::printf("V[%s,%s]%*s %16.8g %16.8g %12.3g %8.2f\n", names[i], names[j],
                        static_cast<int>(7 - strlen(names[i]) - strlen(names[j])), "",
                        det.cov(i, j), mc.cov(i, j), mc.stderr_cov(i, j), z);
        }
    }
    std::printf("n_traj = %ld, dt = %s s, seed = %llu, worst |z| = %.2f\n", cfg.n_traj,
                omem::format_double(cfg.dt, 6).c_str(),
                static_cast<unsigned long long>(cfg.seed), worst_z);
    if (worst_z > 4.0) {
        std::printf("FAIL: deterministic and empirical moments disagree (|z| > 4)\n");
        return 1;
    }
    std::printf("OK: all moments within 4 standard errors\n");
    return 0;
}

int cmd_presets() {
    for (const omem::Preset& p : omem::presets()) {
        std::printf("%-12s %s\n", p.name.c_str(), p.description.c_str());
        std::printf("             omega_m = %s rad/s, kappa = %s rad/s, gamma = %s rad/s\n",
                    omem::format_double(p.params.omega_m, 9).c_str(),
                    omem::format_double(p.params.kappa, 9).c_str(),
                    omem::format_double(p.params.gamma, 9).c_str());
        std::printf("             g0 = %s rad/s, G = %s rad/s, N_m = %g, tau = %s s\n",
                    omem::format_double(p.params.g0, 9).c_str(),
                    omem::format_double(p.params.coupling(), 9).c_str(), p.params.n_mech,
                    omem::format_double(p.protocol.storage_time, 9).c_str());
    }
    return 0;
}

int cmd_dump_config(const CommonArgs& args) {
    const omem::Scenario sc = resolve_scenario(args);
    if (args.out_path.empty()) {
        std::cout << sc.dump();
    } else {
        auto out = open_out(args.out_path);
        out << sc.dump();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-state storage-fidelity simulator for opto/electromechanical "
                 "quantum memories under control-laser phase noise"};
    app.require_subcommand(1);

    CommonArgs fid_args;
    CLI::App* fid = app.add_subcommand("fidelity", "evaluate one storage fidelity");
    add_common_options(fid, fid_args);
    fid->add_option("--out", fid_args.out_path, "also write a one-row CSV");

    CommonArgs sweep_args;
    std::string figure, axis, start, stop;
    int points = 0;
    bool log_spacing = false;
    unsigned threads = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_common_options(sweep, sweep_args);
    sweep->add_option("--figure", figure,
                      "canned sweep bundle: fig3 fig4a fig4b fig5 fig6a fig6b fig7a fig7b fig8");
    sweep->add_option("--axis", axis, "sweep axis: Qm|GammaL|gamma_c|G|tau|r|T");
    sweep->add_option("--start", start, "axis start (accepts unit suffixes)");
    sweep->add_option("--stop", stop, "axis stop");
    sweep->add_option("--points", points, "number of grid points (>= 2)");
    sweep->add_flag("--log", log_spacing, "logarithmic spacing");
    sweep->add_option("--threads", threads, "worker threads (0 = hardware)");
    sweep->add_option("--out", sweep_args.out_path, "output CSV path (default stdout)");

    CommonArgs mc_args;
    long n_traj = 5000;
    std::string dt_text;
    bool full_protocol = false;
    unsigned mc_threads = 0;
    CLI::App* mc = app.add_subcommand(
        "montecarlo", "stochastic-trajectory cross-check of the deterministic engine");
    add_common_options(mc, mc_args);
    mc->add_option("--ntraj", n_traj, "trajectory count (default 5000)");
    mc->add_option("--dt", dt_text, "integration step (default 1e-3/omega_m)");
    mc->add_flag("--full-protocol", full_protocol,
                 "simulate write+store+read instead of the write pulse");
    mc->add_option("--threads", mc_threads, "worker threads (0 = hardware)");

    app.add_subcommand("presets", "list shipped parameter presets");

    CommonArgs dump_args;
    CLI::App* dump = app.add_subcommand("dump-config",
                                        "emit the resolved configuration as a config file");
    add_common_options(dump, dump_args);
    dump->add_option("--out", dump_args.out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("fidelity")) return cmd_fidelity(fid_args);
        if (app.got_subcommand("sweep")) {
            return cmd_sweep(sweep_args, figure, axis, start, stop, points, log_spacing,
                             threads);
        }
        if (app.got_subcommand("montecarlo")) {
            return cmd_montecarlo(mc_args, n_traj, dt_text, full_protocol, mc_threads);
        }
        if (app.got_subcommand("presets")) return cmd_presets();
        if (app.got_subcommand("dump-config")) return cmd_dump_config(dump_args);
    } catch (const omem::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const omem::instability_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const omem::degenerate_state_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const omem::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
