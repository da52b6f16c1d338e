#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dwell/assembly.hpp"

namespace dwell {

struct EigenPair {
    double energy = 0.0;
    Vector coefficients;         // M-normalized
    double residual_norm = 0.0;  // ||H x - E M x||_2
};

struct SolverOptions {
    double tolerance = 1e-8;          // relative to ||H|| ||x||
    std::size_t max_restarts = 300;
    std::size_t subspace = 0;         // 0 picks max(2K + 40, K + 80)
    unsigned seed = 20240917u;        // start vector; results are deterministic
};

struct SolverReport {
    double shift = 0.0;
    std::size_t restarts = 0;
    std::size_t operator_applications = 0;
    std::size_t inertia_below = 0;  // eigenvalues below the certified threshold
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<EigenPair> partial)
        : std::runtime_error(what), partial_(std::move(partial))
    {
    }
    const std::vector<EigenPair>& partial() const { return partial_; }

private:
    std::vector<EigenPair> partial_;
};

/// Number of eigenvalues of H x = E M x strictly below `threshold`, from the
/// inertia of H - threshold M.
std::size_t count_below(const SymmetricSparseMatrix& h, const SymmetricSparseMatrix& m,
                        double threshold);

/// The `count` lowest eigenpairs in ascending order. Shift-invert thick-restart
/// Lanczos in the M inner product, certified by an inertia count.
std::vector<EigenPair> solve_lowest(const SymmetricSparseMatrix& h, const SymmetricSparseMatrix& m,
                                    std::size_t count, const SolverOptions& options = {},
                                    SolverReport* report = nullptr);

/// Smallest gap between consecutive energies that the residual bound cannot
/// certify: |E_n+1 - E_n| below this value is reported but not resolved.
double certified_resolution(const std::vector<EigenPair>& pairs);

// ---------------------------------------------------------------------------
// Finite-difference oracle on a uniform grid, dense eigensolve.

class SizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct OracleOptions {
    bool isolated_left = false;
    double memory_limit_bytes = 1.5e9;
};

/// Single particle in [0, 2l+b] (or [0, l]); returns the `count` lowest energies.
std::vector<double> fd_oracle_1d(const PotentialSpec& spec, std::size_t n_grid, std::size_t count,
                                 const OracleOptions& options = {});

/// Two bosons, exchange-symmetric sector, n_grid interior points per axis.
std::vector<double> fd_oracle(const PotentialSpec& spec, const InteractionSpec& interaction,
                              double strength, std::size_t n_grid, std::size_t count,
                              const OracleOptions& options = {});

}  // namespace dwell
