#include "dwell/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "dwell/io.hpp"

namespace dwell {

namespace {

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
    return out;
}

std::size_t parse_count(const std::string& key, const std::string& v)
{
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": not a count: '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

struct Field {
    const char* key;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define DWELL_REAL(name, member)                                                                        \
    Field                                                                                               \
    {                                                                                                   \
        name, [](RunConfig& c, const std::string& k, const std::string& v) { c.member = parse_double(k, v); }, \
            [](const RunConfig& c) { return format_double(c.member); }                                  \
    }
#define DWELL_COUNT(name, member)                                                                       \
    Field                                                                                               \
    {                                                                                                   \
        name, [](RunConfig& c, const std::string& k, const std::string& v) { c.member = parse_count(k, v); }, \
            [](const RunConfig& c) { return std::to_string(c.member); }                                 \
    }

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = {
        DWELL_REAL("potential.well_length", potential.well_length),
        DWELL_REAL("potential.barrier_width", potential.barrier_width),
        DWELL_REAL("potential.barrier_height", potential.barrier_height),
        Field{"interaction.kind",
              [](RunConfig& c, const std::string&, const std::string& v) {
                  try {
                      c.kind = interaction_kind_from_string(v);
                  } catch (const std::exception& e) {
                      throw ConfigError(e.what());
                  }
              },
              [](const RunConfig& c) { return std::string(to_string(c.kind)); }},
        DWELL_REAL("interaction.softening", softening),
        DWELL_REAL("mesh.size", mesh_size),
        DWELL_COUNT("solver.eigenpairs", eigenpairs),
        DWELL_REAL("solver.tolerance", tolerance),
        DWELL_REAL("solver.norm_floor", norm_floor),
        DWELL_COUNT("solver.max_restarts", max_restarts),
        DWELL_REAL("spectrum.strength", spectrum_strength),
        DWELL_REAL("scan.u_min", scan_min),
        DWELL_REAL("scan.u_max", scan_max),
        DWELL_COUNT("scan.points", scan_points),
        Field{"scan.refine",
              [](RunConfig& c, const std::string& k, const std::string& v) { c.scan_refine = parse_bool(k, v); },
              [](const RunConfig& c) { return std::string(c.scan_refine ? "true" : "false"); }},
        DWELL_REAL("scan.refine_tolerance", refine_tolerance),
        DWELL_REAL("scan.class_threshold", class_threshold),
        DWELL_REAL("scan.participation_threshold", participation_threshold),
        DWELL_REAL("scan.candidate_floor", candidate_floor),
        DWELL_COUNT("scan.threads", threads),
        DWELL_REAL("quench.strength", quench_strength),
        DWELL_REAL("quench.horizon", horizon),
        DWELL_COUNT("quench.samples", samples),
        DWELL_REAL("frequency.dominant_threshold", dominant_threshold),
        DWELL_REAL("frequency.coefficient_floor", coefficient_floor),
        DWELL_COUNT("oracle.grid", oracle_grid),
        DWELL_COUNT("oracle.count", oracle_count),
        Field{"output.directory",
              [](RunConfig& c, const std::string&, const std::string& v) { c.output = v; },
              [](const RunConfig& c) { return c.output.string(); }},
    };
    return table;
}

#undef DWELL_REAL
#undef DWELL_COUNT

}  // namespace

void RunConfig::validate() const
{
    try {
        potential.validate();
        InteractionSpec{kind, softening, 0.0}.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (!(mesh_size > 0.0)) throw ConfigError("mesh.size must be positive");
    if (eigenpairs < 1) throw ConfigError("solver.eigenpairs must be at least 1");
    if (!(tolerance > 0.0)) throw ConfigError("solver.tolerance must be positive");
    if (!(norm_floor > 0.0 && norm_floor <= 1.0)) throw ConfigError("solver.norm_floor must lie in (0, 1]");
    if (!(scan_max > scan_min)) throw ConfigError("scan.u_max must exceed scan.u_min");
    if (scan_points < 3) throw ConfigError("scan.points must be at least 3");
    if (!(refine_tolerance > 0.0)) throw ConfigError("scan.refine_tolerance must be positive");
    if (!(class_threshold > 0.5 && class_threshold <= 1.0)) throw ConfigError("scan.class_threshold must lie in (0.5, 1]");
    if (!(participation_threshold > 0.0)) throw ConfigError("scan.participation_threshold must be positive");
    if (horizon < 0.0) throw ConfigError("quench.horizon must be nonnegative");
    if (samples < 2) throw ConfigError("quench.samples must be at least 2");
    if (!(dominant_threshold > 0.0)) throw ConfigError("frequency.dominant_threshold must be positive");
    if (coefficient_floor < 0.0) throw ConfigError("frequency.coefficient_floor must be nonnegative");
    if (oracle_grid < 2 || oracle_count < 1) throw ConfigError("oracle.grid and oracle.count too small");
    if (output.empty()) throw ConfigError("output.directory must not be empty");
}

SimulationSetup RunConfig::setup() const
{
    SimulationSetup s;
    s.potential = potential;
    s.kind = kind;
    s.softening = softening;
    s.mesh_size = mesh_size;
    s.eigenpairs = eigenpairs;
    s.norm_floor = norm_floor;
    s.solver.tolerance = tolerance;
    s.solver.max_restarts = max_restarts;
    s.frequency.coefficient_floor = coefficient_floor;
    s.dominant_threshold = dominant_threshold;
    return s;
}

ScanOptions RunConfig::scan_options() const
{
    ScanOptions o;
    o.class_threshold = class_threshold;
    o.participation_threshold = participation_threshold;
    o.refine = scan_refine;
    o.refine_tolerance = refine_tolerance;
    o.candidate_floor = candidate_floor;
    o.threads = threads;
    return o;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value)
{
    for (const auto& f : fields()) {
        if (key == f.key) {
            f.set(config, key, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + key + "'");
}

RunConfig parse_config(const std::string& text, RunConfig base)
{
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
        }
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::map<std::string, std::string> config_entries(const RunConfig& config)
{
    std::map<std::string, std::string> out;
    for (const auto& f : fields()) out[f.key] = f.get(config);
    return out;
}

std::string format_config(const RunConfig& config)
{
    std::string out;
    for (const auto& f : fields()) {
        out += f.key;
        out += " = ";
        out += f.get(config);
        out += '\n';
    }
    return out;
}

}  // namespace dwell
