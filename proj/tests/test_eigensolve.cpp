#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dwell/eigensolve.hpp"
#include "support.hpp"

using namespace dwell;
using dwell::testing::dense_eigenvalues;
using dwell::testing::small_bundle;

namespace {

SymmetricSparseMatrix sparse_identity(long n)
{
    SymmetricSparseMatrix m(n, n);
    m.setIdentity();
    return m;
}

// 1D tridiagonal P1 Laplacian on [0, 1] with n elements, built by hand.
std::pair<SymmetricSparseMatrix, SymmetricSparseMatrix> unit_laplacian(int n)
{
    const double h = 1.0 / n;
    std::vector<Eigen::Triplet<double>> k, m;
    for (int i = 0; i < n - 1; ++i) {
        k.emplace_back(i, i, 2.0 / h);
        m.emplace_back(i, i, 4.0 * h / 6.0);
        if (i + 1 < n - 1) {
            k.emplace_back(i, i + 1, -1.0 / h);
            k.emplace_back(i + 1, i, -1.0 / h);
            m.emplace_back(i, i + 1, h / 6.0);
            m.emplace_back(i + 1, i, h / 6.0);
        }
    }
    SymmetricSparseMatrix K(n - 1, n - 1), M(n - 1, n - 1);
    K.setFromTriplets(k.begin(), k.end());
    M.setFromTriplets(m.begin(), m.end());
    return {K, M};
}

}  // namespace

TEST_CASE("diagonal problem")
{
    SymmetricSparseMatrix h(3, 3);
    h.insert(0, 0) = 1.0;
    h.insert(1, 1) = 2.0;
    h.insert(2, 2) = 3.0;
    const auto pairs = solve_lowest(h, sparse_identity(3), 2);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].energy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pairs[1].energy == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(pairs[0].coefficients[0]) == doctest::Approx(1.0));
}

TEST_CASE("1D Dirichlet Laplacian with h = 1/64")
{
    const auto [k, m] = unit_laplacian(64);
    const auto pairs = solve_lowest(k, m, 3);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    for (int n = 1; n <= 3; ++n) {
        const double exact = n * n * pi2;
        CHECK(std::abs(pairs[static_cast<std::size_t>(n - 1)].energy - exact) / exact < 2e-3);
    }
}

TEST_CASE("eigenpair contract on a double-well problem")
{
    const auto b = small_bundle(InteractionKind::SoftCoulomb);
    const auto h = b.hamiltonian(0.4);
    const std::size_t k = 20;
    SolverReport report;
    const auto pairs = solve_lowest(h, b.mass, k, {}, &report);
    REQUIRE(pairs.size() == k);

    const Eigen::VectorXd dense = dense_eigenvalues(h, b.mass);
    const double hnorm = Eigen::MatrixXd(h).cwiseAbs().rowwise().sum().maxCoeff();
    for (std::size_t n = 0; n < k; ++n) {
        const auto& p = pairs[n];
        CHECK(std::abs(p.energy - dense[static_cast<long>(n)]) < 1e-9 * std::max(1.0, std::abs(dense[0])));
        CHECK(p.coefficients.dot(b.mass * p.coefficients) == doctest::Approx(1.0).epsilon(1e-10));
        const double r = (h * p.coefficients - p.energy * (b.mass * p.coefficients)).norm();
        CHECK(r <= 1e-8 * hnorm * p.coefficients.norm());
        CHECK(p.residual_norm == doctest::Approx(r).epsilon(1e-6).scale(1e-20));
        if (n > 0) CHECK(p.energy >= pairs[n - 1].energy);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(std::abs(pairs[j].coefficients.dot(b.mass * p.coefficients)) < 1e-8);
        }
    }
    CHECK(report.inertia_below >= k);
    CHECK(certified_resolution(pairs) < 1e-10);
}

TEST_CASE("no eigenvalue skipped: inertia agrees with the dense count")
{
    const auto b = small_bundle(InteractionKind::Contact);
    const auto h = b.hamiltonian(-0.3);
    const Eigen::VectorXd dense = dense_eigenvalues(h, b.mass);
    for (double threshold : {0.05, 0.2, 0.6}) {
        const auto expected = static_cast<std::size_t>((dense.array() < threshold).count());
        CHECK(count_below(h, b.mass, threshold) == expected);
    }
    // Growing K keeps the same leading levels.
    const auto a = solve_lowest(h, b.mass, 10);
    const auto c = solve_lowest(h, b.mass, 25);
    for (std::size_t n = 0; n < 10; ++n) CHECK(a[n].energy == doctest::Approx(c[n].energy).epsilon(1e-11));
}

TEST_CASE("near-degenerate doublets are both found")
{
    // Wide barrier: the ground doublet splitting is far below 1e-8.
    const PotentialSpec spec{10.0, 4.0, 2.0};
    const auto b = dwell::testing::small_bundle(InteractionKind::Contact, 1.0, 1.0, spec);
    const auto pairs = solve_lowest(b.h0, b.mass, 6);
    const Eigen::VectorXd dense = dense_eigenvalues(b.h0, b.mass);
    for (std::size_t n = 0; n < 6; ++n) CHECK(pairs[n].energy == doctest::Approx(dense[static_cast<long>(n)]).epsilon(1e-10));
    for (std::size_t n = 1; n < 6; ++n) {
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(pairs[j].coefficients.dot(b.mass * pairs[n].coefficients)) < 1e-8);
    }
}

TEST_CASE("2D isolated well at zero interaction is separable")
{
    // l = 1 box: E = (n^2 + m^2) pi^2 with the symmetric sector keeping each pair once.
    const PotentialSpec spec{1.0, 0.0, 0.0};
    auto mesh = std::make_shared<const Mesh2D>(build_1d_mesh(spec, 1.0 / 40.0, true));
    const auto b = assemble_2d(mesh, spec, {InteractionKind::Contact, 1.0, 0.0});
    const auto pairs = solve_lowest(b.h0, b.mass, 4);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double expected[] = {2 * pi2, 5 * pi2, 8 * pi2, 10 * pi2};
    for (std::size_t n = 0; n < 4; ++n) CHECK(std::abs(pairs[n].energy - expected[n]) / expected[n] < 5e-3);
}

TEST_CASE("solver input errors")
{
    const auto [k, m] = unit_laplacian(8);
    CHECK_THROWS_AS(solve_lowest(k, m, 7), std::invalid_argument);
    CHECK_THROWS_AS(solve_lowest(k, sparse_identity(3), 2), std::invalid_argument);
    CHECK_THROWS_AS(solve_lowest(k, m, 0), std::invalid_argument);
}

TEST_CASE("results are deterministic")
{
    const auto b = small_bundle(InteractionKind::HardCoulomb);
    const auto a = solve_lowest(b.hamiltonian(0.5), b.mass, 12);
    const auto c = solve_lowest(b.hamiltonian(0.5), b.mass, 12);
    for (std::size_t n = 0; n < 12; ++n) {
        CHECK(a[n].energy == c[n].energy);
        CHECK((a[n].coefficients - c[n].coefficients).norm() == 0.0);
    }
}

TEST_CASE("finite-difference oracle: 1D infinite well")
{
    const PotentialSpec spec;
    const auto e = fd_oracle_1d(spec, 2000, 3, {true});
    CHECK(std::abs(e[0] - std::numbers::pi * std::numbers::pi / 2500.0) < 1e-6);
    CHECK(e[1] == doctest::Approx(4.0 * e[0]).epsilon(1e-4));
}

TEST_CASE("finite-difference oracle: 2D separable and size limits")
{
    const PotentialSpec spec = dwell::testing::small_well();
    const std::size_t n = 43;
    const auto e1 = fd_oracle_1d(spec, n, 6);
    const auto e2 = fd_oracle(spec, {InteractionKind::Contact, 1.0, 0.0}, 0.0, n, 6);
    std::vector<double> sums;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        for (std::size_t j = i; j < e1.size(); ++j) sums.push_back(e1[i] + e1[j]);
    }
    std::sort(sums.begin(), sums.end());
    for (std::size_t k = 0; k < 6; ++k) CHECK(e2[k] == doctest::Approx(sums[k]).epsilon(1e-10));

    CHECK_THROWS_AS(fd_oracle(PotentialSpec{}, {}, 0.0, 400, 4), SizeError);
}
