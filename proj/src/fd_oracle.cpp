#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "dwell/eigensolve.hpp"

namespace dwell {

namespace {

// Cell average of the one-body potential over [x - d/2, x + d/2]; the
// potential is piecewise constant with breakpoints at l and l + b.
double averaged_potential(double x, double d, const PotentialSpec& spec)
{
    const double a = x - 0.5 * d;
    const double b = x + 0.5 * d;
    const double lo = std::max(a, spec.well_length);
    const double hi = std::min(b, spec.well_length + spec.barrier_width);
    return hi > lo ? spec.barrier_height * (hi - lo) / d : 0.0;
}

// Second antiderivative of 1/sqrt(r^2 + s^2).
double soft_second_antiderivative(double r, double s)
{
    return r * std::asinh(r / s) - std::sqrt(r * r + s * s);
}

// Average of f(x1 - x2) over the square cell of side d centred at offset r.
double soft_cell_average(double r, double d, double s)
{
    return (soft_second_antiderivative(r + d, s) - 2.0 * soft_second_antiderivative(r, s) +
            soft_second_antiderivative(r - d, s)) /
           (d * d);
}

void check_memory(std::size_t dim, const OracleOptions& options)
{
    const double bytes = 8.0 * static_cast<double>(dim) * static_cast<double>(dim) * 2.0;
    if (bytes > options.memory_limit_bytes) {
        throw SizeError("finite-difference oracle: dense problem of dimension " + std::to_string(dim) +
                        " exceeds the memory limit");
    }
}

}  // namespace

std::vector<double> fd_oracle_1d(const PotentialSpec& spec, std::size_t n_grid, std::size_t count,
                                 const OracleOptions& options)
{
    spec.validate();
    if (n_grid < 2 || count == 0 || count > n_grid) throw SizeError("fd_oracle_1d: bad grid or count");
    const double length = options.isolated_left ? spec.well_length : spec.total_length();
    const double d = length / static_cast<double>(n_grid + 1);
    const long n = static_cast<long>(n_grid);
    Vector diag(n);
    Vector off = Vector::Constant(n - 1, -1.0 / (d * d));
    for (long i = 0; i < n; ++i) {
        const double x = d * static_cast<double>(i + 1);
        diag[i] = 2.0 / (d * d) + (options.isolated_left ? 0.0 : averaged_potential(x, d, spec));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + count);
    return out;
}

std::vector<double> fd_oracle(const PotentialSpec& spec, const InteractionSpec& interaction,
                              double strength, std::size_t n_grid, std::size_t count,
                              const OracleOptions& options)
{
    spec.validate();
    interaction.validate();
    const bool hard = interaction.kind == InteractionKind::HardCoulomb;
    const double length = options.isolated_left ? spec.well_length : spec.total_length();
    const double d = length / static_cast<double>(n_grid + 1);

    // Symmetric-sector index of grid pair (i, j), i <= j; diagonal dropped for the hard core.
    std::vector<long> index(n_grid * n_grid, -1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n_grid; ++i) {
        for (std::size_t j = i; j < n_grid; ++j) {
            if (hard && i == j) continue;
            index[i * n_grid + j] = static_cast<long>(pairs.size());
            pairs.emplace_back(i, j);
        }
    }
    const std::size_t dim = pairs.size();
    if (dim <= count) throw SizeError("fd_oracle: grid too small for the requested count");
    check_memory(dim, options);

    auto lookup = [&](std::size_t i, std::size_t j) -> long {
        if (i > j) std::swap(i, j);
        return index[i * n_grid + j];
    };

    std::vector<double> v1(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        v1[i] = options.isolated_left ? 0.0 : averaged_potential(d * static_cast<double>(i + 1), d, spec);
    }

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<long>(dim), static_cast<long>(dim));
    const double lap = 1.0 / (d * d);
    for (std::size_t r = 0; r < dim; ++r) {
        const auto [i, j] = pairs[r];
        const long rr = static_cast<long>(r);
        const double sep = d * (static_cast<double>(j) - static_cast<double>(i));
        double pot = v1[i] + v1[j];
        switch (interaction.kind) {
        case InteractionKind::Contact:
            if (i == j) pot += strength / d;
            break;
        case InteractionKind::SoftCoulomb:
            pot += strength * soft_cell_average(sep, d, interaction.softening);
            break;
        case InteractionKind::HardCoulomb:
            pot += strength / sep;
            break;
        }
        a(rr, rr) += 4.0 * lap + pot;

        // Neighbours of the full-grid point (i, j); symmetrized functions
        // (e_ij + e_ji)/sqrt2 couple with weight ratio w(target)/w(source).
        const std::pair<long, long> steps[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        for (const auto& [di, dj] : steps) {
            const long ni = static_cast<long>(i) + di;
            const long nj = static_cast<long>(j) + dj;
            if (ni < 0 || nj < 0 || ni >= static_cast<long>(n_grid) || nj >= static_cast<long>(n_grid)) continue;
            const long c = lookup(static_cast<std::size_t>(ni), static_cast<std::size_t>(nj));
            if (c < 0) continue;
            // <B_r| L |B_c> accumulated from the (i, j) component of B_r.
            const double factor = (i == j ? 1.0 : 1.0 / std::sqrt(2.0)) *
                                  (static_cast<std::size_t>(ni) == static_cast<std::size_t>(nj)
                                       ? 1.0
                                       : 1.0 / std::sqrt(2.0));
            const double mult = (i == j) ? 1.0 : 2.0;
            a(rr, c) -= lap * factor * mult;
        }
    }
    // Guard against rounding asymmetry.
    a = 0.5 * (a + a.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + count);
}

}  // namespace dwell
