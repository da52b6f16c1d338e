#pragma once

#include <Eigen/Sparse>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include "dwell/domain.hpp"
#include "dwell/mesh.hpp"

namespace dwell {

using Vector = Eigen::VectorXd;

/// Sparse matrix with full symmetric storage; entries (i, j) and (j, i) are
/// bitwise equal.
using SymmetricSparseMatrix = Eigen::SparseMatrix<double>;

/// Writes the upper triangle as "row col value" lines (0-based).
void write_coordinate(std::ostream& out, const SymmetricSparseMatrix& a);

/// Replaces a by (a + a^T) / 2 so that the storage is exactly symmetric.
SymmetricSparseMatrix symmetrized(const SymmetricSparseMatrix& a);

// ---------------------------------------------------------------------------
// One particle

struct OneBodyOperators {
    SymmetricSparseMatrix hamiltonian;  // stiffness + potential
    SymmetricSparseMatrix mass;
    std::vector<std::size_t> dofs;      // mesh node behind each row
};

/// P1 stiffness, potential and consistent mass with Dirichlet nodes removed.
OneBodyOperators assemble_1d(const Mesh1D& mesh, const PotentialSpec& spec);

// ---------------------------------------------------------------------------
// Two bosons

/// Bilinear tensor-product functions phi_p(x1) phi_q(x2) on grid cells, or
/// piecewise-linear hats on the diagonal-aligned triangles.
enum class ElementFamily { Bilinear, Linear };

/// Contact and soft-core interactions use the tensor-product family. The
/// hard core uses hats so that excluding the diagonal nodes makes every state
/// vanish on the whole line x1 = x2.
ElementFamily element_family_for(InteractionKind kind);

/// Exchange-symmetric basis: for every unordered pair {p, q} of active axis
/// nodes the function (phi_pq + phi_qp) / sqrt(2) (p != q) or phi_pp.
class BosonicBasis {
public:
    BosonicBasis(std::shared_ptr<const Mesh2D> mesh, ElementFamily family, bool exclude_diagonal);

    const Mesh2D& mesh() const { return *mesh_; }
    std::shared_ptr<const Mesh2D> mesh_ptr() const { return mesh_; }
    ElementFamily family() const { return family_; }
    bool excludes_diagonal() const { return exclude_diagonal_; }

    std::size_t size() const { return pairs_.size(); }
    const std::vector<std::array<std::size_t, 2>>& pairs() const { return pairs_; }
    /// Reduced index of the pair {p, q}, or -1 when excluded.
    long index_of(std::size_t p, std::size_t q) const;

    /// Whether a mesh node carries a degree of freedom.
    bool node_active(std::size_t a) const;

    /// Columns are the symmetrized functions expressed in mesh-node functions.
    const Eigen::SparseMatrix<double>& embedding() const { return embedding_; }

    /// Coefficients of every mesh-node function (the nodal values).
    Vector nodal_values(const Vector& coefficients) const;
    double evaluate(const Vector& coefficients, double x1, double x2) const;

    /// Coefficients of psi(L - x1, L - x2); requires a mirror-symmetric mesh.
    Vector mirror(const Vector& coefficients) const;

private:
    std::shared_ptr<const Mesh2D> mesh_;
    ElementFamily family_;
    bool exclude_diagonal_;
    std::vector<std::array<std::size_t, 2>> pairs_;
    std::vector<long> index_;
    Eigen::SparseMatrix<double> embedding_;
};

struct RegionOverlaps {
    SymmetricSparseMatrix region_I;
    SymmetricSparseMatrix region_II;
    SymmetricSparseMatrix region_III;
};

/// H(U) = h0 + U * interaction in the basis; all matrices U-independent.
struct OperatorBundle {
    std::shared_ptr<const BosonicBasis> basis;
    SymmetricSparseMatrix h0;
    SymmetricSparseMatrix interaction;
    SymmetricSparseMatrix mass;
    RegionOverlaps regions;
    InteractionKind kind = InteractionKind::Contact;

    SymmetricSparseMatrix hamiltonian(double strength) const;
    std::size_t dimension() const { return basis->size(); }
};

struct AssemblyOptions {
    std::size_t smooth_order = 4;     // Gauss points per direction, polynomial terms
    std::size_t coulomb_far_order = 4;
    std::size_t coulomb_near_order = 8;  // cells within two steps of the diagonal
    std::size_t line_order = 3;          // contact measure per diagonal edge
};

OperatorBundle assemble_2d(std::shared_ptr<const Mesh2D> mesh, const PotentialSpec& spec,
                           const InteractionSpec& interaction, const AssemblyOptions& options = {});

/// S_R[a][b] = integral over region R of the product of basis functions a, b.
/// Elements cut by the midpoint lines are clipped exactly.
RegionOverlaps assemble_region_overlaps(const BosonicBasis& basis, const PotentialSpec& spec,
                                        const AssemblyOptions& options = {});

/// Lifts coefficients from a basis on a prefix of the same axis (the isolated
/// left well) into `target`. Pairs absent from `source` get zero.
Vector embed_coefficients(const BosonicBasis& source, const BosonicBasis& target,
                          const Vector& coefficients);

}  // namespace dwell
