#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dwell/frequency.hpp"
#include "dwell/quench.hpp"
#include "dwell/spectral_scan.hpp"

namespace dwell {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

std::ofstream open_output(const std::filesystem::path& path, bool append = false);
void write_text(const std::filesystem::path& path, const std::string& text);

void write_spectrum_csv(std::ostream& out, const ScanPoint& point);
void write_timeseries_csv(std::ostream& out, const TimeSeries& series);
void write_frequencies_csv(std::ostream& out, const FrequencySpectrum& spectrum, double threshold);

/// "a-b" from the branch ids of the two eigenstates behind a beat, smaller first.
std::string component_id(const ScanPoint& point, const FrequencyComponent& c);

// Streaming scan output. Base records go out in U order; refinement rows follow.
extern const char* const scan_header;
extern const char* const scan_points_header;
extern const char* const dominant_header;
void write_scan_rows(std::ostream& out, const ScanPoint& point);
void write_scan_point_row(std::ostream& out, const ScanPoint& point);
void write_dominant_rows(std::ostream& out, const ScanPoint& point);
void write_crossings_csv(std::ostream& out, const ScanResult& scan);

/// Reads back the complete base records of an interrupted scan in `dir`
/// (scan.csv, scan_points.csv, dominant_vs_U.csv). Empty when nothing to resume.
std::vector<ScanPoint> read_scan_records(const std::filesystem::path& dir);

}  // namespace dwell
