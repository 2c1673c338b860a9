#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "gsc/errors.hpp"
#include "gsc/graph.hpp"

namespace gsc {

// Orthonormal eigenvector basis of the combinatorial Laplacian L = D − A,
// eigenvalues ascending (graph frequencies). Column signs are canonicalized:
// each column is flipped so its largest-magnitude entry is positive (ties →
// first such entry), making reports reproducible; downstream variance
// features are sign-invariant anyway.
struct GftBasis {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd V;
    GraphSpec sourceSpec;

    int r() const { return static_cast<int>(V.rows()); }
};

// In-place sign canonicalization of every column.
inline void canonicalize_columns(Eigen::MatrixXd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Eigen::Index best = 0;
        double bestAbs = -1.0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double a = std::abs(m(i, j));
            if (a > bestAbs) {
                bestAbs = a;
                best = i;
            }
        }
        if (m(best, j) < 0.0) m.col(j) = -m.col(j);
    }
}

inline GftBasis gft_basis(const BrainGraph& graph) {
    const int r = graph.r();
    GftBasis basis;
    basis.sourceSpec = graph.spec;
    if (graph.spec.kind == GraphKind::Identity) {
        basis.eigenvalues = Eigen::VectorXd::Zero(r);
        basis.V = Eigen::MatrixXd::Identity(r, r);
        return basis;
    }
    const Eigen::MatrixXd lap = laplacian(graph);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success)
        throw NumericalError("Laplacian eigendecomposition failed to converge (r=" +
                             std::to_string(r) + ", |L|_max=" +
                             std::to_string(lap.cwiseAbs().maxCoeff()) + ")");
    // SelfAdjointEigenSolver returns ascending eigenvalues; equal eigenvalues
    // keep the solver's deterministic order for a fixed input.
    basis.eigenvalues = solver.eigenvalues();
    basis.V = solver.eigenvectors();
    canonicalize_columns(basis.V);
    const double orthoResidual =
        (basis.V.transpose() * basis.V - Eigen::MatrixXd::Identity(r, r))
            .cwiseAbs()
            .maxCoeff();
    if (orthoResidual >= 1e-10)
        throw NumericalError("basis orthonormality residual " + std::to_string(orthoResidual));
    return basis;
}

// The identity basis used by the spatial-only baseline.
inline GftBasis identity_basis(int r) {
    GftBasis basis;
    basis.sourceSpec.kind = GraphKind::Identity;
    basis.eigenvalues = Eigen::VectorXd::Zero(r);
    basis.V = Eigen::MatrixXd::Identity(r, r);
    return basis;
}

}  // namespace gsc
