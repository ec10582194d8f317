// shelvesim.cpp - command-line front end: scenario sweeps, single correlations, presets
//
// Exit codes: 0 success, 1 usage or validation error, 2 numerical failure
// (including unconverged rows under --strict).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "shelvesim/correlations.hpp"
#include "shelvesim/output.hpp"
#include "shelvesim/scenario.hpp"
#include "shelvesim/sweep.hpp"

namespace {

namespace sw = shelvesim::sweep;
namespace corr = shelvesim::correlations;
namespace models = shelvesim::models;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

struct RunArgs {
    std::string scenario;
    std::string out;
    std::string format;
    int workers = 0;
    int coarsen = 0;
    bool strict = false;
    bool timings = false;
    bool quiet = false;
};

struct GnArgs {
    std::string model = "lambda";
    int order = 2;
    double omega = 0.0, omega_r = 0.0, delta_a = 0.0, delta_e = 0.0;
    double v_eg = 0.0, omega_b = 0.0, delta_s = 0.0;
    double kappa = 1.0, delta_b = 0.0;
    double gc = 0.0;
    int nmax = 0;
    int nmax_ceiling = 0;
    bool strict = false;
};

int cmd_run(const RunArgs& a) {
    sw::Scenario s;
    try {
        s = sw::load_scenario(a.scenario);
        if (a.coarsen > 0) s = sw::coarsen(s, a.coarsen);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    sw::OutputFormat format = sw::OutputFormat::csv;
    if (!a.format.empty()) {
        format = *sw::parse_format(a.format);
    } else if (std::filesystem::path(a.out).extension() == ".json") {
        format = sw::OutputFormat::json;
    }

    sw::SweepOptions opts;
    opts.workers = a.workers > 0 ? a.workers : sw::default_workers();
    std::size_t last_percent = 101;
    if (!a.quiet) {
        opts.progress = [&](std::size_t done, std::size_t total) {
            const std::size_t percent = done * 100 / total;
            if (percent / 5 != last_percent / 5 || done == total) {
                last_percent = percent;
                std::fprintf(stderr, "\r%s: %zu/%zu tasks (%zu%%)", s.name.c_str(), done, total, percent);
                if (done == total) std::fputc('\n', stderr);
                std::fflush(stderr);
            }
        };
    }

    sw::SweepResult r;
    try {
        r = sw::run_sweep(s, opts);
    } catch (const sw::ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: sweep failed: " << e.what() << '\n';
        return kNumerical;
    }

    try {
        sw::EmitOptions eo;
        eo.timings = a.timings;
        sw::emit_results(r, format, a.out, eo);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    if (!a.quiet) {
        std::fprintf(stderr, "%s: %zu rows, %zu unconverged, %.1f s with %d worker(s) -> %s\n", s.name.c_str(),
                     r.rows.size(), r.solver.unconverged_rows, r.wall_seconds, opts.workers, a.out.c_str());
    }
    if (a.strict && r.solver.unconverged_rows > 0) {
        std::cerr << "error: " << r.solver.unconverged_rows << " row(s) did not converge (--strict)\n";
        return kNumerical;
    }
    return kOk;
}

int cmd_gn(const GnArgs& a) {
    corr::EmitterParams emitter;
    models::SensorConfig sensor;
    corr::ProtocolOptions options;
    sensor.kappa = a.kappa;
    sensor.delta_b = a.delta_b;
    if (a.gc > 0.0) sensor.g_c = a.gc;
    if (a.nmax > 0) sensor.n_max = a.nmax;
    if (a.nmax_ceiling > 0) options.nmax_ceiling = a.nmax_ceiling;

    if (a.model == "rb87") {
        models::RbParams p;
        p.v_eg = a.v_eg;
        p.omega_b_field = a.omega_b;
        p.delta_e = a.delta_e;
        p.delta_s = a.delta_s;
        emitter = p;
    } else {
        models::LambdaParams p;
        p.omega = a.omega;
        p.omega_r = a.omega_r;
        p.delta_a = a.delta_a;
        p.delta_e = a.delta_e;
        emitter = p;
        if (a.model == "cavity") {
            options.coupling = corr::Coupling::cavity;
            if (!(a.gc > 0.0)) {
                std::cerr << "error: --gc is required for --model cavity\n";
                return kUsage;
            }
        }
    }

    corr::FilteredCorrelation f;
    try {
        f = corr::filtered_gn(emitter, sensor, a.order, options);
    } catch (const corr::MomentUnderflow& e) {
        std::cerr << "error: " << e.what() << " (threshold " << sw::format_real(e.threshold()) << ")\n";
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }

    std::cout << 'g' << a.order << " = " << sw::format_real(f.value) << '\n'
              << "converged = " << (f.converged ? "true" : "false") << '\n'
              << "g_c_used = " << sw::format_real(f.g_c_used) << '\n'
              << "n_max_used = " << f.n_max_used << '\n'
              << "gc_change = " << sw::format_real(f.gc_change) << '\n'
              << "nmax_change = " << sw::format_real(f.nmax_change) << '\n';
    return a.strict && !f.converged ? kNumerical : kOk;
}

int cmd_presets(const std::string& export_dir) {
    for (const auto& name : sw::preset_names()) {
        const auto s = *sw::find_preset(name);
        std::cout << name << "  [" << sw::to_string(s.model) << "]  " << s.description << '\n';
    }
    if (export_dir.empty()) return kOk;
    std::error_code ec;
    std::filesystem::create_directories(export_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create '" << export_dir << "': " << ec.message() << '\n';
        return kUsage;
    }
    for (const auto& name : sw::preset_names()) {
        const auto path = std::filesystem::path(export_dir) / (name + ".json");
        std::ofstream out(path, std::ios::binary);
        out << sw::scenario_to_json(*sw::find_preset(name));
        if (!out) {
            std::cerr << "error: failed to write '" << path.string() << "'\n";
            return kUsage;
        }
    }
    std::cerr << "exported " << sw::preset_names().size() << " presets to " << export_dir << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shelving-emitter photon statistics: sweeps of filtered correlations"};
    app.set_version_flag("--version", std::string("shelvesim ") + std::string(sw::toolkit_version()) +
                                          " (scenario schema " + std::to_string(sw::kSchemaVersion) + ")");
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Evaluate a scenario (preset name or JSON file)");
    run_cmd->add_option("--scenario", run.scenario, "Preset name or path to a scenario JSON file")->required();
    run_cmd->add_option("--out", run.out, "Output file")->required();
    run_cmd->add_option("--format", run.format, "csv or json (default: from the file extension, else csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_option("--workers", run.workers, "Worker threads (default: $SHELVESIM_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--coarsen", run.coarsen, "Clamp every grid to at most this many points")
        ->check(CLI::Range(2, 1000000));
    run_cmd->add_flag("--strict", run.strict, "Exit with code 2 when any row did not converge");
    run_cmd->add_flag("--timings", run.timings, "Add per-row wall time (output is then not reproducible)");
    run_cmd->add_flag("--quiet", run.quiet, "No progress output");

    GnArgs gn;
    auto* gn_cmd = app.add_subcommand("gn", "Filtered N-th order correlation at one parameter point");
    gn_cmd->add_option("--model", gn.model, "lambda, cavity or rb87")
        ->check(CLI::IsMember({"lambda", "cavity", "rb87"}));
    gn_cmd->add_option("--order", gn.order, "Correlation order N >= 2")->check(CLI::Range(2, 8));
    gn_cmd->add_option("--omega", gn.omega, "Rabi frequency on |g>-|e> (units of gamma)");
    gn_cmd->add_option("--omega-r", gn.omega_r, "Rabi frequency on |g>-|a>");
    gn_cmd->add_option("--delta-a", gn.delta_a, "Detuning of |a>");
    gn_cmd->add_option("--delta-e", gn.delta_e, "Detuning of the excited state");
    gn_cmd->add_option("--v-eg", gn.v_eg, "Rb: drive coupling on |1,-1>-|0,0> (units of Gamma)");
    gn_cmd->add_option("--omega-b", gn.omega_b, "Rb: transverse magnetic coupling");
    gn_cmd->add_option("--delta-s", gn.delta_s, "Rb: sensor detuning");
    gn_cmd->add_option("--kappa", gn.kappa, "Filter or cavity bandwidth");
    gn_cmd->add_option("--delta-b", gn.delta_b, "Filter detuning (Lambda and cavity models)");
    gn_cmd->add_option("--gc", gn.gc, "Coupling g_c (filter default 1e-3; required for cavity)");
    gn_cmd->add_option("--nmax", gn.nmax, "Initial Fock truncation (default order + 3)");
    gn_cmd->add_option("--nmax-ceiling", gn.nmax_ceiling, "Largest Fock truncation tried (default 2N + 4)");
    gn_cmd->add_flag("--strict", gn.strict, "Exit with code 2 when the protocol did not converge");

    std::string export_dir;
    auto* presets_cmd = app.add_subcommand("presets", "List the embedded scenarios");
    presets_cmd->add_option("--export", export_dir, "Write every preset as <dir>/<name>.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    if (*run_cmd) return cmd_run(run);
    if (*gn_cmd) return cmd_gn(gn);
    if (*presets_cmd) return cmd_presets(export_dir);
    return kUsage;
}
