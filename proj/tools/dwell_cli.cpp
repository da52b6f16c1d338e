#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "dwell/config.hpp"
#include "dwell/io.hpp"
#include "dwell/spectral_scan.hpp"

namespace fs = std::filesystem;
using namespace dwell;

namespace {

enum ExitCode { ok = 0, failure = 1, config_error = 2, convergence_error = 3 };

void log(const std::string& msg)
{
    std::cerr << "[dwell] " << msg << std::endl;
}

void prepare_output(const RunConfig& cfg)
{
    std::error_code ec;
    fs::create_directories(cfg.output, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output.string() + ": " + ec.message());
    write_text(cfg.output / "config.conf", format_config(cfg));
}

void dump_debug(const RunConfig& cfg, const Simulator& sim, bool mesh, bool matrices, double strength)
{
    const auto& ops = sim.operators();
    if (mesh) {
        auto nodes = open_output(cfg.output / "mesh_nodes.csv");
        auto tris = open_output(cfg.output / "mesh_triangles.csv");
        nodes.precision(17);
        ops.basis->mesh().write_csv(nodes, tris);
    }
    if (matrices) {
        auto h = open_output(cfg.output / "hamiltonian.coo");
        write_coordinate(h, ops.hamiltonian(strength));
        auto m = open_output(cfg.output / "mass.coo");
        write_coordinate(m, ops.mass);
    }
}

void cmd_spectrum(const RunConfig& cfg, bool mesh, bool matrices)
{
    Simulator sim(cfg.setup());
    dump_debug(cfg, sim, mesh, matrices, cfg.spectrum_strength);
    const ScanPoint p = evaluate_point(sim, cfg.spectrum_strength, cfg.scan_options());
    auto out = open_output(cfg.output / "spectrum.csv");
    write_spectrum_csv(out, p);
    log("spectrum: " + std::to_string(p.levels.size()) + " levels, E0 = " + format_double(p.levels.front().energy));
}

void cmd_quench(const RunConfig& cfg)
{
    Simulator sim(cfg.setup());
    const QuenchPoint q = sim.analyze(cfg.quench_strength);
    std::optional<double> period;
    try {
        period = tunneling_period(q.dominant.components);
    } catch (const UndefinedPeriodError& e) {
        log(e.what());
    }
    double horizon = cfg.horizon;
    if (horizon == 0.0) {
        if (!period) throw ConfigError("no tunneling period; set quench.horizon explicitly");
        horizon = 1.25 * *period;
    }
    const TimeSeries series = evolve_probabilities(q.decomposition, q.regions, uniform_times(horizon, cfg.samples));
    {
        auto out = open_output(cfg.output / "timeseries.csv");
        write_timeseries_csv(out, series);
    }
    {
        auto out = open_output(cfg.output / "frequencies.csv");
        write_frequencies_csv(out, q.spectrum, cfg.dominant_threshold);
    }
    double amplitude_sum = 0.0;
    for (const auto& c : q.spectrum.components) amplitude_sum += c.amplitude;
    const std::string period_text = period ? format_double(*period) : "undefined";
    std::string summary;
    summary += "strength = " + format_double(q.strength) + "\n";
    summary += "initial_energy = " + format_double(q.initial.energy) + "\n";
    summary += "captured_norm = " + format_double(q.decomposition.captured_norm) + "\n";
    summary += "tunneling_period = " + period_text + "\n";
    summary += "dominant_count = " + std::to_string(q.dominant.components.size()) + "\n";
    summary += "amplitude_sum = " + format_double(amplitude_sum) + "\n";
    summary += "horizon = " + format_double(horizon) + "\n";
    if (q.decomposition.warning) summary += "warning = " + *q.decomposition.warning + "\n";
    write_text(cfg.output / "summary.txt", summary);

    nlohmann::ordered_json j;
    j["strength"] = q.strength;
    j["initial_energy"] = q.initial.energy;
    j["captured_norm"] = q.decomposition.captured_norm;
    j["tunneling_period"] = period ? nlohmann::ordered_json(*period) : nlohmann::ordered_json(nullptr);
    j["amplitude_sum"] = amplitude_sum;
    j["mean_n_left"] = q.spectrum.mean;
    j["dominant"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < q.dominant.components.size(); ++k) {
        const auto& c = q.dominant.components[k];
        j["dominant"].push_back({{"omega", c.omega}, {"A", c.amplitude}, {"m", c.m}, {"n", c.n},
                                 {"negative", static_cast<bool>(q.dominant.negative[k])}});
    }
    if (q.decomposition.warning) j["warning"] = *q.decomposition.warning;
    write_text(cfg.output / "summary.json", j.dump(2) + "\n");
    log("quench: captured_norm = " + format_double(q.decomposition.captured_norm) + ", T = " + period_text);
}

void cmd_scan(const RunConfig& cfg, bool resume)
{
    Simulator sim(cfg.setup());
    const auto grid = uniform_grid(cfg.scan_min, cfg.scan_max, cfg.scan_points);
    const ScanOptions options = cfg.scan_options();

    std::vector<ScanPoint> previous;
    if (resume && !fs::exists(cfg.output / "crossings.csv")) previous = read_scan_records(cfg.output);
    if (previous.size() > grid.size()) throw ConfigError("resumed scan has more points than scan.points");
    if (!previous.empty()) log("scan: resuming after " + std::to_string(previous.size()) + " points");

    auto scan_out = open_output(cfg.output / "scan.csv");
    auto points_out = open_output(cfg.output / "scan_points.csv");
    auto dominant_out = open_output(cfg.output / "dominant_vs_U.csv");
    scan_out << scan_header;
    points_out << scan_points_header;
    dominant_out << dominant_header;
    const auto emit = [&](const ScanPoint& p) {
        write_scan_rows(scan_out, p);
        write_dominant_rows(dominant_out, p);
        scan_out.flush();
        dominant_out.flush();
        write_scan_point_row(points_out, p);
        points_out.flush();
    };
    for (const auto& p : previous) emit(p);

    const auto t0 = std::chrono::steady_clock::now();
    std::size_t done = previous.size();
    const ScanResult result = scan_levels(
        sim, grid, options,
        [&](const ScanPoint& p) {
            emit(p);
            ++done;
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            log("scan: U = " + format_double(p.strength) + " (" + std::to_string(done) + "/" +
                std::to_string(grid.size()) + ", " + std::to_string(static_cast<int>(secs)) + " s)");
        },
        std::move(previous));

    for (const auto& p : result.refinements) {
        write_scan_rows(scan_out, p);
        write_dominant_rows(dominant_out, p);
    }
    scan_out.flush();
    dominant_out.flush();
    {
        auto out = open_output(cfg.output / "crossings.csv");
        write_crossings_csv(out, result);
    }

    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(cfg.kind));
    j["grid_points"] = result.points.size();
    j["refinement_points"] = result.refinements.size();
    j["ambiguous_matches"] = result.ambiguous_matches;
    j["crossings"] = nlohmann::ordered_json::array();
    for (const auto& x : result.crossings) {
        std::vector<std::string> types;
        for (auto t : x.types) types.emplace_back(to_string(t));
        j["crossings"].push_back(
            {{"U_center", x.center}, {"gap", x.gap}, {"participants", x.participants}, {"types", types}});
    }
    j["unresolved"] = result.unresolved;
    try {
        j["off_resonance_U"] = select_off_resonance(result);
    } catch (const std::exception&) {
        j["off_resonance_U"] = nullptr;
    }
    write_text(cfg.output / "summary.json", j.dump(2) + "\n");
    log("scan: " + std::to_string(result.crossings.size()) + " avoided crossing(s)");
}

void cmd_oracle(const RunConfig& cfg)
{
    const auto energies = fd_oracle(cfg.potential, cfg.setup().interaction(cfg.spectrum_strength),
                                    cfg.spectrum_strength, cfg.oracle_grid, cfg.oracle_count);
    auto out = open_output(cfg.output / "oracle.csv");
    out << "n,E\n";
    for (std::size_t n = 0; n < energies.size(); ++n) out << n << ',' << format_double(energies[n]) << '\n';
    log("oracle: E0 = " + format_double(energies.front()));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two bosons in a double well: spectra, quench dynamics and interaction scans"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "Configuration file (key = value)");

    std::map<std::string, std::string> overrides;
    for (const auto& [key, value] : config_entries(RunConfig{})) {
        app.add_option_function<std::string>(
               "--" + key, [&overrides, key = key](const std::string& v) { overrides[key] = v; },
               "default " + value)
            ->group("Configuration");
    }

    auto* spectrum = app.add_subcommand("spectrum", "Lowest eigenpairs at spectrum.strength");
    bool dump_mesh = false;
    bool dump_matrices = false;
    spectrum->add_flag("--dump-mesh", dump_mesh, "Also write mesh_nodes.csv and mesh_triangles.csv");
    spectrum->add_flag("--dump-matrices", dump_matrices, "Also write hamiltonian.coo and mass.coo");
    auto* quench = app.add_subcommand("quench", "Time evolution after releasing the left-well ground state");
    auto* scan = app.add_subcommand("scan", "Sweep the interaction strength and locate avoided crossings");
    bool resume = false;
    scan->add_flag("--resume", resume, "Continue an interrupted scan in the output directory");
    auto* oracle = app.add_subcommand("oracle", "Finite-difference reference energies at spectrum.strength");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        for (const auto& [key, value] : overrides) apply_setting(cfg, key, value);
        cfg.validate();
        prepare_output(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }

    try {
        if (spectrum->parsed()) cmd_spectrum(cfg, dump_mesh, dump_matrices);
        else if (quench->parsed()) cmd_quench(cfg);
        else if (scan->parsed()) cmd_scan(cfg, resume);
        else if (oracle->parsed()) cmd_oracle(cfg);
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return convergence_error;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return ok;
}
