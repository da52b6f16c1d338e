#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "dwell/simulator.hpp"
#include "dwell/spectral_scan.hpp"

namespace dwell {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    PotentialSpec potential;
    InteractionKind kind = InteractionKind::Contact;
    double softening = 1.0;
    double mesh_size = 1.0;

    std::size_t eigenpairs = 150;
    double tolerance = 1e-8;
    double norm_floor = 0.999;
    std::size_t max_restarts = 300;

    double spectrum_strength = 0.0;

    double scan_min = -0.5;
    double scan_max = 1.0;
    std::size_t scan_points = 61;
    bool scan_refine = true;
    double refine_tolerance = 1e-4;
    double class_threshold = 0.6;
    double participation_threshold = 0.05;
    double candidate_floor = 5e-3;
    std::size_t threads = 1;

    double quench_strength = 0.0;
    double horizon = 0.0;  // 0: 1.25 tunneling periods
    std::size_t samples = 2048;

    double dominant_threshold = 0.01;
    double coefficient_floor = 1e-6;

    std::size_t oracle_grid = 102;
    std::size_t oracle_count = 10;

    std::filesystem::path output = "out";

    void validate() const;
    SimulationSetup setup() const;
    ScanOptions scan_options() const;
};

/// Sets one dotted key ("potential.well_length") from its text value.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat "key = value" text; '#' starts a comment.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// All keys in a fixed order, in a form parse_config reads back exactly.
std::string format_config(const RunConfig& config);
std::map<std::string, std::string> config_entries(const RunConfig& config);

}  // namespace dwell
