#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "dwell/simulator.hpp"

namespace dwell {

enum class StateClass { T11, T20, Mixed };

std::string_view to_string(StateClass c);

struct StateClassification {
    StateClass state_class = StateClass::Mixed;
    double w_I = 0.0;
    double w_II = 0.0;
    double w_III = 0.0;
};

/// Region weights w_R = phi^T S_R phi; T11 if w_II >= threshold, T20 if
/// w_I + w_III >= threshold, mixed otherwise.
StateClassification classify_state(const EigenPair& pair, const RegionOverlaps& regions,
                                   double threshold = 0.6);

/// dE/dU = phi^T V_int phi for an M-normalized eigenpair.
double hellmann_feynman_slope(const EigenPair& pair, const SymmetricSparseMatrix& interaction);

struct LevelRecord {
    double energy = 0.0;
    double slope = 0.0;
    double weight = 0.0;  // |<phi_n|g_L>|^2
    double residual = 0.0;
    StateClassification classification;
    long branch = -1;
};

struct ScanPoint {
    double strength = 0.0;
    double initial_energy = 0.0;
    double captured_norm = 0.0;
    /// sum_n |c_n|^2 w_II(n): the time-averaged probability of one particle
    /// per side. Near zero for pair tunneling, large at resonances.
    double resonance = 0.0;
    bool refined = false;
    std::vector<LevelRecord> levels;
    std::vector<FrequencyComponent> dominant;
    double amplitude_sum = 0.0;  // sum of all computed A_k
};

struct AvoidedCrossing {
    double center = 0.0;
    double gap = 0.0;
    std::vector<std::size_t> participants;  // level indices at the center
    std::vector<StateClass> types;
    double resonance = 0.0;
};

struct ScanOptions {
    double class_threshold = 0.6;
    double participation_threshold = 0.05;
    bool refine = true;
    double refine_tolerance = 1e-4;
    double ambiguity = 1e-3;          // overlap tie that triggers energy tie-breaking
    double candidate_floor = 5e-3;    // minimum grid resonance worth refining
    std::size_t threads = 1;          // concurrent per-U solves
    /// Absolute energy window for crossing participants; unset means all levels.
    std::optional<std::pair<double, double>> window;
};

struct ScanResult {
    std::vector<ScanPoint> points;        // base grid, ascending U
    std::vector<ScanPoint> refinements;   // probes added around crossings
    std::vector<AvoidedCrossing> crossings;
    std::vector<double> unresolved;       // candidates at the grid edge
    std::size_t ambiguous_matches = 0;
    std::size_t next_branch = 0;
};

/// Overlap-based diabatic branch assignment across consecutive U values.
class BranchTracker {
public:
    explicit BranchTracker(double ambiguity = 1e-3) : ambiguity_(ambiguity) {}

    /// Assigns branch ids to the levels of a new point. `vectors` columns are
    /// M-normalized eigenvectors; the first call opens one branch per level.
    std::vector<long> assign(const Eigen::MatrixXd& vectors, const std::vector<double>& energies,
                             const SymmetricSparseMatrix& mass);

    /// Resumes from known ids (e.g. read back from disk).
    void reset(const Eigen::MatrixXd& vectors, const std::vector<double>& energies, std::vector<long> ids,
               std::size_t next_branch);

    /// |<phi_prev|M|phi_new>| of the match made for each new level (0 if new).
    const std::vector<double>& match_overlaps() const { return overlaps_; }
    std::size_t ambiguous() const { return ambiguous_; }
    std::size_t next_branch() const { return next_; }

private:
    double ambiguity_;
    Eigen::MatrixXd prev_;
    Eigen::MatrixXd prev_m_;
    std::vector<double> prev_energy_;
    std::vector<long> prev_ids_;
    std::vector<double> overlaps_;
    std::size_t next_ = 0;
    std::size_t ambiguous_ = 0;
};

/// Evaluates one U: eigenpairs, isolated ground state, weights, slopes,
/// classes and dominant beats.
ScanPoint evaluate_point(const Simulator& sim, double strength, const ScanOptions& options,
                         std::vector<EigenPair>* pairs_out = nullptr);

using ScanSink = std::function<void(const ScanPoint&)>;

/// Sweeps U over `grid` (sorted), tracking branches, then detects and refines
/// avoided crossings. `sink` sees each base point in U order as soon as it is
/// final. `resume` supplies already-computed leading points.
ScanResult scan_levels(const Simulator& sim, const std::vector<double>& grid, const ScanOptions& options = {},
                       const ScanSink& sink = {}, std::vector<ScanPoint> resume = {});

/// Crossing detection over an existing scan; `probe` evaluates extra U values
/// for refinement (may be empty to disable refinement).
std::vector<AvoidedCrossing> detect_avoided_crossings(
    ScanResult& scan, const ScanOptions& options,
    const std::function<ScanPoint(double)>& probe = {});

/// A base-grid U far from every detected crossing with the smallest resonance.
double select_off_resonance(const ScanResult& scan, std::size_t min_steps = 3);

std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

}  // namespace dwell
