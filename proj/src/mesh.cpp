#include "dwell/mesh.hpp"

#include <cmath>
#include <ostream>

namespace dwell {

namespace {

void append_segment(std::vector<double>& nodes, double a, double b, double h)
{
    if (b <= a) return;
    const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / h - 1e-12));
    const double step = (b - a) / static_cast<double>(pieces);
    for (std::size_t k = 1; k < pieces; ++k) nodes.push_back(a + step * static_cast<double>(k));
    nodes.push_back(b);
}

}  // namespace

Mesh1D build_1d_mesh(const PotentialSpec& spec, double h, bool isolated_left)
{
    spec.validate();
    if (!(h > 0.0)) throw ResolutionError("mesh size h must be positive");
    if (h > spec.well_length) {
        throw ResolutionError("mesh size h exceeds the well length");
    }

    Mesh1D mesh;
    mesh.nodes.push_back(0.0);
    append_segment(mesh.nodes, 0.0, spec.well_length, h);
    if (isolated_left) return mesh;

    append_segment(mesh.nodes, spec.well_length, spec.well_length + spec.barrier_width, h);
    append_segment(mesh.nodes, spec.well_length + spec.barrier_width, spec.total_length(), h);

    // Make the node set mirror-symmetric to the last bit.
    const double total = spec.total_length();
    const std::size_t n = mesh.nodes.size();
    for (std::size_t i = 0; i < n / 2; ++i) mesh.nodes[n - 1 - i] = total - mesh.nodes[i];
    if (n % 2 == 1) mesh.nodes[n / 2] = spec.midpoint();
    return mesh;
}

Mesh2D::Mesh2D(Mesh1D axis) : axis_(std::move(axis))
{
    if (axis_.size() < 2) throw ResolutionError("2D mesh needs at least two axis nodes");
    const std::size_t cells = axis_.size() - 1;
    triangles_.reserve(2 * cells * cells);
    for (std::size_t i = 0; i < cells; ++i) {
        for (std::size_t j = 0; j < cells; ++j) {
            const std::size_t a = node_index(i, j);
            const std::size_t b = node_index(i + 1, j);
            const std::size_t c = node_index(i + 1, j + 1);
            const std::size_t d = node_index(i, j + 1);
            triangles_.push_back({a, b, c});
            triangles_.push_back({a, c, d});
        }
        diagonal_edges_.push_back({node_index(i, i), node_index(i + 1, i + 1)});
    }
}

NodeClass Mesh2D::node_class(std::size_t a) const
{
    const auto [i, j] = node_ij(a);
    if (i == j) return NodeClass::Diagonal;
    if (on_outer_boundary(a)) return NodeClass::OuterBoundary;
    return NodeClass::Interior;
}

bool Mesh2D::on_outer_boundary(std::size_t a) const
{
    const auto [i, j] = node_ij(a);
    return axis_.is_boundary(i) || axis_.is_boundary(j);
}

std::size_t Mesh2D::exchange(std::size_t a) const
{
    const auto [i, j] = node_ij(a);
    return node_index(j, i);
}

std::array<std::size_t, 2> Mesh2D::triangle_cell(std::size_t t) const
{
    const std::size_t cells = axis_.size() - 1;
    const std::size_t c = t / 2;
    return {c / cells, c % cells};
}

std::size_t Mesh2D::exchange_triangle(std::size_t t) const
{
    const std::size_t cells = axis_.size() - 1;
    const auto [i, j] = triangle_cell(t);
    return 2 * (j * cells + i) + (1 - t % 2);
}

double Mesh2D::triangle_area(std::size_t t) const
{
    const auto& tri = triangles_[t];
    const auto p = node_position(tri[0]);
    const auto q = node_position(tri[1]);
    const auto r = node_position(tri[2]);
    return 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]));
}

void Mesh2D::write_csv(std::ostream& nodes_out, std::ostream& triangles_out) const
{
    nodes_out << "index,x1,x2,class\n";
    for (std::size_t a = 0; a < node_count(); ++a) {
        const auto p = node_position(a);
        const char* cls = "interior";
        switch (node_class(a)) {
        case NodeClass::Interior: break;
        case NodeClass::OuterBoundary: cls = "outer_boundary"; break;
        case NodeClass::Diagonal: cls = "diagonal"; break;
        }
        nodes_out << a << ',' << p[0] << ',' << p[1] << ',' << cls << '\n';
    }
    triangles_out << "index,a,b,c\n";
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        triangles_out << t << ',' << tri[0] << ',' << tri[1] << ',' << tri[2] << '\n';
    }
}

}  // namespace dwell
