#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "dwell/domain.hpp"

namespace dwell {

class ResolutionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Interval mesh on [0, 2l+b] (or [0, l] for the isolated left well) with
/// every potential breakpoint as a node.
struct Mesh1D {
    std::vector<double> nodes;

    std::size_t size() const { return nodes.size(); }
    std::size_t element_count() const { return nodes.size() - 1; }
    double length() const { return nodes.back() - nodes.front(); }
    double element_size(std::size_t e) const { return nodes[e + 1] - nodes[e]; }
    std::array<std::size_t, 2> boundary_nodes() const { return {0, nodes.size() - 1}; }
    bool is_boundary(std::size_t i) const { return i == 0 || i + 1 == nodes.size(); }
};

Mesh1D build_1d_mesh(const PotentialSpec& spec, double h, bool isolated_left);

enum class NodeClass { Interior, OuterBoundary, Diagonal };

/// Tensor-product triangulation of the configuration square. Node (i, j) sits
/// at (x_i, x_j) and has index i * n + j. Each grid cell is cut along the
/// direction parallel to x1 = x2, so the diagonal is a union of triangle edges.
class Mesh2D {
public:
    explicit Mesh2D(Mesh1D axis);

    const Mesh1D& axis() const { return axis_; }
    std::size_t axis_size() const { return axis_.size(); }
    std::size_t node_count() const { return axis_.size() * axis_.size(); }
    std::size_t cell_count() const { return (axis_.size() - 1) * (axis_.size() - 1); }

    std::size_t node_index(std::size_t i, std::size_t j) const { return i * axis_.size() + j; }
    std::array<std::size_t, 2> node_ij(std::size_t a) const
    {
        return {a / axis_.size(), a % axis_.size()};
    }
    std::array<double, 2> node_position(std::size_t a) const
    {
        const auto [i, j] = node_ij(a);
        return {axis_.nodes[i], axis_.nodes[j]};
    }

    NodeClass node_class(std::size_t a) const;
    bool on_outer_boundary(std::size_t a) const;

    /// Index of the node with swapped coordinates.
    std::size_t exchange(std::size_t a) const;

    const std::vector<std::array<std::size_t, 3>>& triangles() const { return triangles_; }
    /// Grid cell (i, j) containing triangle t; t = 2 * (i * (n-1) + j) + {0 lower, 1 upper}.
    std::array<std::size_t, 2> triangle_cell(std::size_t t) const;
    std::size_t exchange_triangle(std::size_t t) const;
    double triangle_area(std::size_t t) const;

    /// Pairs of node indices along x1 = x2.
    const std::vector<std::array<std::size_t, 2>>& diagonal_edges() const { return diagonal_edges_; }

    void write_csv(std::ostream& nodes_out, std::ostream& triangles_out) const;

private:
    Mesh1D axis_;
    std::vector<std::array<std::size_t, 3>> triangles_;
    std::vector<std::array<std::size_t, 2>> diagonal_edges_;
};

inline Mesh2D build_2d_mesh(const Mesh1D& m) { return Mesh2D(m); }

}  // namespace dwell
