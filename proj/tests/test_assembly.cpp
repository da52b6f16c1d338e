#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dwell/assembly.hpp"
#include "support.hpp"

using namespace dwell;
using dwell::testing::constant_vector;
using dwell::testing::dense_eigenvalues;
using dwell::testing::small_bundle;
using dwell::testing::small_well;

namespace {

double asymmetry(const SymmetricSparseMatrix& a)
{
    return (Eigen::MatrixXd(a) - Eigen::MatrixXd(a).transpose()).cwiseAbs().maxCoeff();
}

const InteractionKind all_kinds[] = {InteractionKind::Contact, InteractionKind::SoftCoulomb,
                                     InteractionKind::HardCoulomb};

}  // namespace

TEST_CASE("1D: two elements on the unit interval give 12")
{
    // One interior node: stiffness 2/h = 4, consistent mass 2h/3 = 1/3.
    const auto ops = assemble_1d(Mesh1D{{0.0, 0.5, 1.0}}, PotentialSpec{0.5, 0.0, 0.0});
    REQUIRE(ops.hamiltonian.rows() == 1);
    CHECK(ops.hamiltonian.coeff(0, 0) == doctest::Approx(4.0));
    CHECK(ops.mass.coeff(0, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(dense_eigenvalues(ops.hamiltonian, ops.mass)[0] == doctest::Approx(12.0).epsilon(1e-14));
}

TEST_CASE("1D: isolated well approaches pi^2 / l^2")
{
    // Uniform P1 with consistent mass has the closed form 6 (1 - cos kh) / (h^2 (2 + cos kh)).
    const PotentialSpec spec;
    const double h = 0.25;
    const auto ops = assemble_1d(build_1d_mesh(spec, h, true), spec);
    const double k = std::numbers::pi / spec.well_length;
    const double discrete = 6.0 * (1.0 - std::cos(k * h)) / (h * h * (2.0 + std::cos(k * h)));
    const double e = dense_eigenvalues(ops.hamiltonian, ops.mass)[0];
    CHECK(e == doctest::Approx(discrete).epsilon(1e-10));
    CHECK(std::abs(e - k * k) / (k * k) < 3e-5);
}

TEST_CASE("1D: mass total matches the domain length minus the end ramps")
{
    const PotentialSpec spec;
    const auto mesh = build_1d_mesh(spec, 1.0, false);
    const auto ops = assemble_1d(mesh, spec);
    const double ends = mesh.element_size(0) + mesh.element_size(mesh.element_count() - 1);
    CHECK(Eigen::MatrixXd(ops.mass).sum() == doctest::Approx(spec.total_length() - 2.0 * ends / 3.0).epsilon(1e-13));
    CHECK(asymmetry(ops.hamiltonian) == 0.0);
    CHECK(asymmetry(ops.mass) == 0.0);
}

TEST_CASE("2D: matrices are exactly symmetric and M is positive definite")
{
    for (auto kind : all_kinds) {
        const auto b = small_bundle(kind);
        CHECK(asymmetry(b.h0) == 0.0);
        CHECK(asymmetry(b.mass) == 0.0);
        CHECK(asymmetry(b.interaction) == 0.0);
        CHECK(asymmetry(b.regions.region_II) == 0.0);
        Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(b.mass)};
        CHECK(llt.info() == Eigen::Success);
    }
}

TEST_CASE("2D: H(U) is linear in U and the operators do not depend on U")
{
    const PotentialSpec spec = small_well();
    auto mesh = std::make_shared<const Mesh2D>(build_1d_mesh(spec, 1.0, false));
    const auto a = assemble_2d(mesh, spec, {InteractionKind::SoftCoulomb, 1.0, 0.2});
    const auto b = assemble_2d(mesh, spec, {InteractionKind::SoftCoulomb, 1.0, 0.7});
    CHECK(Eigen::MatrixXd(a.h0 - b.h0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Eigen::MatrixXd(a.interaction - b.interaction).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd diff = Eigen::MatrixXd(a.hamiltonian(0.45)) -
                                 (Eigen::MatrixXd(a.h0) + 0.45 * Eigen::MatrixXd(a.interaction));
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("2D: zero interaction spectrum is the symmetric pairwise sums of the 1D spectrum")
{
    const PotentialSpec spec = small_well();
    const auto axis = build_1d_mesh(spec, 1.0, false);
    const auto one = assemble_1d(axis, spec);
    const Eigen::VectorXd e1 = dense_eigenvalues(one.hamiltonian, one.mass);
    std::vector<double> sums;
    for (long i = 0; i < e1.size(); ++i) {
        for (long j = i; j < e1.size(); ++j) sums.push_back(e1[i] + e1[j]);
    }
    std::sort(sums.begin(), sums.end());

    for (auto kind : {InteractionKind::Contact, InteractionKind::SoftCoulomb}) {
        const auto b = small_bundle(kind);
        const Eigen::VectorXd e2 = dense_eigenvalues(b.h0, b.mass);
        REQUIRE(static_cast<std::size_t>(e2.size()) == sums.size());
        double worst = 0.0;
        for (long k = 0; k < e2.size(); ++k) worst = std::max(worst, std::abs(e2[k] - sums[k]) / sums[k]);
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("2D: contact measure of the constant function is the diagonal length")
{
    // Along x1 = x2 the function is f(s)^2 with f the interior-hat sum, so the
    // form is the integral of f^4: 1 except on the two end edges, where f ramps
    // linearly and contributes h/5 each instead of h.
    const PotentialSpec spec = small_well();
    for (double h : {1.0, 0.5}) {
        const auto b = small_bundle(InteractionKind::Contact, h);
        const Vector c = constant_vector(*b.basis);
        const double form = c.dot(b.interaction * c);
        CHECK(form == doctest::Approx(spec.total_length() - 8.0 * h / 5.0).epsilon(1e-12));
    }
}

TEST_CASE("2D: large softening gives 1/Delta times the norm")
{
    const double delta = 1e3;
    const auto b = small_bundle(InteractionKind::SoftCoulomb, 1.0, delta);
    const double l = small_well().total_length();
    Vector c = constant_vector(*b.basis);
    c /= std::sqrt(c.dot(b.mass * c));
    const double form = c.dot(b.interaction * c);
    CHECK(std::abs(form - 1.0 / delta) <= l * l / (2.0 * delta * delta * delta));
    CHECK(form < 1.0 / delta);
}

TEST_CASE("2D: interaction shapes are positive semidefinite")
{
    for (auto kind : all_kinds) {
        const auto b = small_bundle(kind, 2.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(b.interaction), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-14 * es.eigenvalues().maxCoeff());
    }
}

TEST_CASE("2D: region overlaps tile the mass matrix")
{
    for (auto kind : all_kinds) {
        const auto b = small_bundle(kind, 0.75);
        const SymmetricSparseMatrix sum = b.regions.region_I + b.regions.region_II + b.regions.region_III;
        CHECK(Eigen::MatrixXd(sum - b.mass).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("2D: region forms of the constant function are products of half-line integrals")
{
    // For f = sum of interior hats on the axis, int f^2 over [0, x_mid] is
    // x_mid - 2h/3 (one end ramp), likewise on the right half.
    const PotentialSpec spec = small_well();
    const double h = 0.5;
    const auto b = small_bundle(InteractionKind::SoftCoulomb, h);
    const Vector c = constant_vector(*b.basis);
    const double left = spec.midpoint() - 2.0 * h / 3.0;
    const double right = spec.total_length() - spec.midpoint() - 2.0 * h / 3.0;
    CHECK(c.dot(b.regions.region_I * c) == doctest::Approx(left * left).epsilon(1e-12));
    CHECK(c.dot(b.regions.region_II * c) == doctest::Approx(2.0 * left * right).epsilon(1e-12));
    CHECK(c.dot(b.regions.region_III * c) == doctest::Approx(right * right).epsilon(1e-12));
}

TEST_CASE("2D: the midpoint need not be a mesh node")
{
    // h = 0.4 cuts the unit barrier in three, so x_mid = 10.5 is no node.
    const PotentialSpec spec = small_well();
    const auto axis = build_1d_mesh(spec, 0.4, false);
    CHECK(std::none_of(axis.nodes.begin(), axis.nodes.end(), [&](double x) { return x == spec.midpoint(); }));
    const auto b = small_bundle(InteractionKind::Contact, 0.4);
    const Vector c = constant_vector(*b.basis);
    CHECK(c.dot(b.regions.region_I * c) == doctest::Approx(c.dot(b.regions.region_III * c)).epsilon(1e-12));
}

TEST_CASE("2D: left-well states have no weight in regions II and III, mirror swaps I and III")
{
    const PotentialSpec spec = small_well();
    for (auto kind : all_kinds) {
        const auto b = small_bundle(kind);
        Vector c = Vector::Zero(static_cast<long>(b.basis->size()));
        const auto& axis = b.basis->mesh().axis();
        for (std::size_t k = 0; k < b.basis->size(); ++k) {
            const auto& pq = b.basis->pairs()[k];
            if (axis.nodes[pq[0]] < spec.well_length && axis.nodes[pq[1]] < spec.well_length) {
                c[static_cast<long>(k)] = std::sin(0.3 * static_cast<double>(k)) + 1.5;
            }
        }
        CHECK(c.dot(b.regions.region_II * c) == 0.0);
        CHECK(c.dot(b.regions.region_III * c) == 0.0);
        CHECK(c.dot(b.regions.region_I * c) > 0.0);

        const Vector m = b.basis->mirror(c);
        CHECK(m.dot(b.regions.region_III * m) == doctest::Approx(c.dot(b.regions.region_I * c)).epsilon(1e-12));
        CHECK(m.dot(b.regions.region_I * m) == doctest::Approx(0.0));
    }
}

TEST_CASE("2D: hard-core basis vanishes on the diagonal")
{
    const auto b = small_bundle(InteractionKind::HardCoulomb);
    CHECK(b.basis->excludes_diagonal());
    const auto& mesh = b.basis->mesh();
    for (std::size_t i = 0; i < mesh.axis_size(); ++i) CHECK_FALSE(b.basis->node_active(mesh.node_index(i, i)));
    const Vector c = constant_vector(*b.basis);
    for (double s : {0.3, 2.0, 5.55, 10.5, 17.25}) CHECK(b.basis->evaluate(c, s, s) == 0.0);
    CHECK(b.basis->evaluate(c, 3.0, 5.0) == doctest::Approx(1.0));

    const auto contact = small_bundle(InteractionKind::Contact);
    CHECK(contact.basis->size() > b.basis->size());
    const std::size_t n = mesh.axis_size() - 2;
    CHECK(contact.basis->size() == n * (n + 1) / 2);
    CHECK(b.basis->size() == n * (n - 1) / 2);
}

TEST_CASE("2D: embedding the isolated-well basis")
{
    const PotentialSpec spec = small_well();
    auto full_mesh = std::make_shared<const Mesh2D>(build_1d_mesh(spec, 1.0, false));
    auto iso_mesh = std::make_shared<const Mesh2D>(build_1d_mesh(spec, 1.0, true));
    const BosonicBasis full(full_mesh, ElementFamily::Bilinear, false);
    const BosonicBasis iso(iso_mesh, ElementFamily::Bilinear, false);
    const Vector c = constant_vector(iso);
    const Vector e = embed_coefficients(iso, full, c);
    for (double x : {0.5, 3.0, 9.5}) CHECK(full.evaluate(e, x, 2.0) == doctest::Approx(iso.evaluate(c, x, 2.0)));
    CHECK(full.evaluate(e, 12.0, 2.0) == 0.0);
    CHECK(full.evaluate(e, 10.0, 10.0) == 0.0);
}

TEST_CASE("matrix dump format")
{
    const auto ops = assemble_1d(Mesh1D{{0.0, 0.5, 1.0, 1.5}}, PotentialSpec{0.75, 0.0, 0.0});
    std::ostringstream out;
    write_coordinate(out, ops.mass);
    const std::string text = out.str();
    CHECK(text.rfind("2 2\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
