#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dwell/mesh.hpp"

using namespace dwell;

TEST_CASE("1D meshes contain the breakpoints")
{
    const PotentialSpec spec;
    const auto coarse = build_1d_mesh(spec, 25.0, false);
    const std::vector<double> expected{0, 25, 50, 53, 78, 103};
    REQUIRE(coarse.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(coarse.nodes[i] == doctest::Approx(expected[i]));

    const auto iso = build_1d_mesh(spec, 50.0, true);
    CHECK(iso.nodes == std::vector<double>{0.0, 50.0});

    const auto fine = build_1d_mesh(spec, 1.0, false);
    CHECK(fine.size() == 104);
    for (std::size_t e = 0; e < fine.element_count(); ++e) CHECK(fine.element_size(e) <= 1.0 + 1e-12);
    for (double b : {0.0, 50.0, 53.0, 103.0}) {
        CHECK(std::any_of(fine.nodes.begin(), fine.nodes.end(), [&](double x) { return x == b; }));
    }
    CHECK(fine.boundary_nodes() == std::array<std::size_t, 2>{0, 103});

    CHECK_THROWS_AS(build_1d_mesh(spec, 60.0, false), ResolutionError);
    CHECK_THROWS_AS(build_1d_mesh(spec, 0.0, false), ResolutionError);
}

TEST_CASE("isolated-well mesh is a prefix of the full mesh")
{
    const PotentialSpec spec;
    for (double h : {2.0, 1.0, 0.7}) {
        const auto full = build_1d_mesh(spec, h, false);
        const auto iso = build_1d_mesh(spec, h, true);
        REQUIRE(iso.size() <= full.size());
        for (std::size_t i = 0; i < iso.size(); ++i) CHECK(iso.nodes[i] == full.nodes[i]);
        CHECK(iso.nodes.back() == spec.well_length);
    }
}

TEST_CASE("smallest 2D mesh")
{
    const Mesh2D m(Mesh1D{{0.0, 1.0}});
    CHECK(m.cell_count() == 1);
    CHECK(m.triangles().size() == 2);
    CHECK(m.diagonal_edges().size() == 1);
}

TEST_CASE("2D mesh over three nodes")
{
    const Mesh2D m(Mesh1D{{0.0, 1.0, 2.0}});
    CHECK(m.triangles().size() == 8);
    std::set<std::size_t> diagonal;
    for (std::size_t a = 0; a < m.node_count(); ++a) {
        if (m.node_class(a) == NodeClass::Diagonal) diagonal.insert(a);
    }
    CHECK(diagonal == std::set<std::size_t>{m.node_index(0, 0), m.node_index(1, 1), m.node_index(2, 2)});
    CHECK(m.node_class(m.node_index(0, 1)) == NodeClass::OuterBoundary);
    CHECK(m.node_class(m.node_index(1, 2)) == NodeClass::OuterBoundary);
}

TEST_CASE("2D mesh invariants on the double well")
{
    const PotentialSpec spec;
    const Mesh2D m(build_1d_mesh(spec, 4.0, false));
    const std::size_t n = m.axis_size();
    CHECK(m.triangles().size() == 2 * (n - 1) * (n - 1));

    double area = 0.0;
    for (std::size_t t = 0; t < m.triangles().size(); ++t) {
        REQUIRE(m.triangle_area(t) > 0.0);
        area += m.triangle_area(t);
    }
    const double total = spec.total_length() * spec.total_length();
    CHECK(std::abs(area - total) / total < 1e-12);

    for (std::size_t a = 0; a < m.node_count(); ++a) REQUIRE(m.exchange(m.exchange(a)) == a);

    // The exchange map sends triangles to triangles (as vertex sets).
    for (std::size_t t = 0; t < m.triangles().size(); ++t) {
        const auto& tri = m.triangles()[t];
        std::set<std::size_t> image;
        for (auto v : tri) image.insert(m.exchange(v));
        const auto& other = m.triangles()[m.exchange_triangle(t)];
        REQUIRE(image == std::set<std::size_t>(other.begin(), other.end()));
    }

    // Every diagonal node sits on a diagonal edge, and no triangle has vertices
    // strictly on both sides of x1 = x2.
    std::set<std::size_t> on_edges;
    for (const auto& e : m.diagonal_edges()) {
        on_edges.insert(e[0]);
        on_edges.insert(e[1]);
        const auto p = m.node_position(e[0]);
        const auto q = m.node_position(e[1]);
        CHECK(p[0] == p[1]);
        CHECK(q[0] == q[1]);
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(on_edges.count(m.node_index(i, i)) == 1);
    for (const auto& tri : m.triangles()) {
        bool above = false, below = false;
        for (auto v : tri) {
            const auto p = m.node_position(v);
            above |= p[1] > p[0];
            below |= p[1] < p[0];
        }
        REQUIRE_FALSE((above && below));
    }
}

TEST_CASE("mesh csv dump")
{
    const Mesh2D m(Mesh1D{{0.0, 1.0, 2.0}});
    std::ostringstream nodes, tris;
    m.write_csv(nodes, tris);
    const std::string a = nodes.str();
    const std::string b = tris.str();
    CHECK(a.rfind("index,x1,x2,class\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 10);
    CHECK(std::count(b.begin(), b.end(), '\n') == 9);
}
