#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dwell/assembly.hpp"
#include "dwell/eigensolve.hpp"

namespace dwell {

/// Two-particle ground state of the isolated left well, embedded into the
/// full double-well basis (zero outside [0, l]^2).
struct InitialState {
    Vector coefficients;
    double energy = 0.0;
    std::shared_ptr<const BosonicBasis> basis;
};

/// Operators on the isolated left well [0, l]^2 for one interaction shape;
/// reusable across U values.
class IsolatedWell {
public:
    IsolatedWell(const PotentialSpec& spec, const InteractionSpec& interaction, double h,
                 const AssemblyOptions& options = {});

    const OperatorBundle& operators() const { return bundle_; }

    /// Ground state at strength U, embedded into `target`.
    InitialState ground_state(double strength, std::shared_ptr<const BosonicBasis> target,
                              const SolverOptions& solver = {}) const;

private:
    OperatorBundle bundle_;
};

InitialState initial_state(const PotentialSpec& spec, const InteractionSpec& interaction, double h,
                           std::shared_ptr<const BosonicBasis> target, const SolverOptions& solver = {});

struct SpectralDecomposition {
    std::vector<double> overlaps;  // c_n = phi_n^T M g
    std::vector<double> energies;
    double captured_norm = 0.0;
    std::optional<std::string> warning;
};

SpectralDecomposition decompose(const InitialState& state, const std::vector<EigenPair>& pairs,
                                const SymmetricSparseMatrix& mass, double norm_floor = 0.999);

/// Q_R[m][n] = phi_m^T S_R phi_n for the three regions.
struct RegionMatrices {
    Eigen::MatrixXd region_I;
    Eigen::MatrixXd region_II;
    Eigen::MatrixXd region_III;
};

RegionMatrices project_regions(const std::vector<EigenPair>& pairs, const RegionOverlaps& regions);

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> p0;  // zero particles left (region III)
    std::vector<double> p1;  // one particle left (region II)
    std::vector<double> p2;  // both left (region I)
    std::vector<double> n_left;
};

/// Exact evolution in the truncated eigenbasis; no renormalization.
TimeSeries evolve_probabilities(const SpectralDecomposition& d, const RegionMatrices& q,
                                const std::vector<double>& times);

/// Uniform grid of `count` samples on [0, horizon].
std::vector<double> uniform_times(double horizon, std::size_t count);

}  // namespace dwell
