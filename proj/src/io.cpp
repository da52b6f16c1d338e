#include "dwell/io.hpp"

#include <array>
#include <charconv>
#include <map>
#include <sstream>

namespace dwell {

const char* const scan_header = "U,n,E,branch_id,slope,class,weight\n";
const char* const scan_points_header = "U,E_initial,captured_norm,resonance,amplitude_sum\n";
const char* const dominant_header = "U,omega,A,component_id\n";

std::string format_double(double x)
{
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw IoError("format_double failed");
    return std::string(buf.data(), ptr);
}

std::ofstream open_output(const std::filesystem::path& path, bool append)
{
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    auto out = open_output(path);
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void write_spectrum_csv(std::ostream& out, const ScanPoint& point)
{
    out << "n,E,slope,w_I,w_II,w_III,class,residual\n";
    for (std::size_t n = 0; n < point.levels.size(); ++n) {
        const auto& l = point.levels[n];
        const auto& c = l.classification;
        out << n << ',' << format_double(l.energy) << ',' << format_double(l.slope) << ','
            << format_double(c.w_I) << ',' << format_double(c.w_II) << ',' << format_double(c.w_III) << ','
            << to_string(c.state_class) << ',' << format_double(l.residual) << '\n';
    }
}

void write_timeseries_csv(std::ostream& out, const TimeSeries& s)
{
    out << "t,P0,P1,P2,N_L\n";
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        out << format_double(s.times[i]) << ',' << format_double(s.p0[i]) << ',' << format_double(s.p1[i]) << ','
            << format_double(s.p2[i]) << ',' << format_double(s.n_left[i]) << '\n';
    }
}

void write_frequencies_csv(std::ostream& out, const FrequencySpectrum& spectrum, double threshold)
{
    out << "omega,A,m,n,dominant_flag\n";
    for (const auto& c : spectrum.components) {
        const char* flag = "0";
        if (c.amplitude >= threshold) flag = "1";
        else if (-c.amplitude >= threshold) flag = "negative";
        out << format_double(c.omega) << ',' << format_double(c.amplitude) << ',' << c.m << ',' << c.n << ','
            << flag << '\n';
    }
}

std::string component_id(const ScanPoint& point, const FrequencyComponent& c)
{
    long a = point.levels.at(c.m).branch;
    long b = point.levels.at(c.n).branch;
    if (a > b) std::swap(a, b);
    return std::to_string(a) + "-" + std::to_string(b);
}

void write_scan_rows(std::ostream& out, const ScanPoint& p)
{
    const std::string u = format_double(p.strength);
    for (std::size_t n = 0; n < p.levels.size(); ++n) {
        const auto& l = p.levels[n];
        out << u << ',' << n << ',' << format_double(l.energy) << ',' << l.branch << ',' << format_double(l.slope)
            << ',' << to_string(l.classification.state_class) << ',' << format_double(l.weight) << '\n';
    }
}

void write_scan_point_row(std::ostream& out, const ScanPoint& p)
{
    out << format_double(p.strength) << ',' << format_double(p.initial_energy) << ','
        << format_double(p.captured_norm) << ',' << format_double(p.resonance) << ','
        << format_double(p.amplitude_sum) << '\n';
}

void write_dominant_rows(std::ostream& out, const ScanPoint& p)
{
    const std::string u = format_double(p.strength);
    for (const auto& c : p.dominant) {
        out << u << ',' << format_double(c.omega) << ',' << format_double(c.amplitude) << ',' << component_id(p, c)
            << '\n';
    }
}

void write_crossings_csv(std::ostream& out, const ScanResult& scan)
{
    out << "U_center,gap,participants,types\n";
    for (const auto& x : scan.crossings) {
        std::string parts;
        std::string types;
        for (std::size_t k = 0; k < x.participants.size(); ++k) {
            if (k) {
                parts += ';';
                types += ';';
            }
            parts += std::to_string(x.participants[k]);
            types += to_string(x.types[k]);
        }
        out << format_double(x.center) << ',' << format_double(x.gap) << ',' << parts << ',' << types << '\n';
    }
}

namespace {

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path, const char* header)
{
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    if (!in) return rows;
    std::string line;
    if (!std::getline(in, line)) return rows;
    if (line + "\n" != header) throw IoError(path.string() + ": unexpected header");
    while (std::getline(in, line)) {
        if (in.eof()) break;  // a final line without newline was cut off mid-write
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

double number(const std::string& s)
{
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw IoError("malformed number '" + s + "'");
    return x;
}

StateClass state_class_from(const std::string& s)
{
    if (s == "T11") return StateClass::T11;
    if (s == "T20") return StateClass::T20;
    if (s == "mixed") return StateClass::Mixed;
    throw IoError("unknown class '" + s + "'");
}

}  // namespace

std::vector<ScanPoint> read_scan_records(const std::filesystem::path& dir)
{
    // scan_points.csv is written last for each U, so it lists the complete points.
    const auto summary = read_rows(dir / "scan_points.csv", scan_points_header);
    std::vector<ScanPoint> points;
    for (const auto& r : summary) {
        if (r.size() != 5) throw IoError("scan_points.csv: bad row");
        ScanPoint p;
        p.strength = number(r[0]);
        p.initial_energy = number(r[1]);
        p.captured_norm = number(r[2]);
        p.resonance = number(r[3]);
        p.amplitude_sum = number(r[4]);
        points.push_back(std::move(p));
    }
    if (points.empty()) return points;

    std::size_t k = 0;
    for (const auto& r : read_rows(dir / "scan.csv", scan_header)) {
        if (r.size() != 7) throw IoError("scan.csv: bad row");
        const double u = number(r[0]);
        while (k < points.size() && points[k].strength != u) ++k;
        if (k == points.size()) break;
        LevelRecord l;
        l.energy = number(r[2]);
        l.branch = std::stol(r[3]);
        l.slope = number(r[4]);
        l.classification.state_class = state_class_from(r[5]);
        l.weight = number(r[6]);
        if (std::stoul(r[1]) != points[k].levels.size()) throw IoError("scan.csv: level rows out of order");
        points[k].levels.push_back(l);
    }
    for (const auto& p : points) {
        if (p.levels.empty()) throw IoError("scan.csv is missing levels listed in scan_points.csv");
    }

    k = 0;
    for (const auto& r : read_rows(dir / "dominant_vs_U.csv", dominant_header)) {
        if (r.size() != 4) throw IoError("dominant_vs_U.csv: bad row");
        const double u = number(r[0]);
        while (k < points.size() && points[k].strength != u) ++k;
        if (k == points.size()) break;
        auto& p = points[k];
        std::map<long, std::size_t> level_of;
        for (std::size_t n = 0; n < p.levels.size(); ++n) level_of[p.levels[n].branch] = n;
        const auto dash = r[3].find('-', 1);
        const std::size_t a = level_of.at(std::stol(r[3].substr(0, dash)));
        const std::size_t b = level_of.at(std::stol(r[3].substr(dash + 1)));
        FrequencyComponent c;
        c.omega = number(r[1]);
        c.amplitude = number(r[2]);
        c.m = std::min(a, b);
        c.n = std::max(a, b);
        p.dominant.push_back(c);
    }
    return points;
}

}  // namespace dwell
