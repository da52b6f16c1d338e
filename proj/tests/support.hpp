#pragma once

#include <Eigen/Dense>

#include "dwell/assembly.hpp"

namespace dwell::testing {

inline Eigen::VectorXd dense_eigenvalues(const SymmetricSparseMatrix& h, const SymmetricSparseMatrix& m)
{
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h), Eigen::MatrixXd(m),
                                                                Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Coefficients whose nodal values are 1 on every active node.
inline Vector constant_vector(const BosonicBasis& basis)
{
    Vector c(static_cast<long>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto& pq = basis.pairs()[k];
        c[static_cast<long>(k)] = pq[0] == pq[1] ? 1.0 : std::sqrt(2.0);
    }
    return c;
}

inline PotentialSpec small_well() { return {10.0, 1.0, 0.3}; }

inline OperatorBundle small_bundle(InteractionKind kind, double h = 1.0, double softening = 1.0,
                                   PotentialSpec spec = small_well())
{
    auto mesh = std::make_shared<const Mesh2D>(build_1d_mesh(spec, h, false));
    return assemble_2d(mesh, spec, {kind, softening, 0.0});
}

}  // namespace dwell::testing
