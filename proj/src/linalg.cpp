#include "dbcsp/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace dbcsp::linalg {

namespace {

// Flip column signs so the entry of largest magnitude is positive. Keeps
// eigenvector output deterministic across solver implementations.
void canonicalize_columns(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index imax = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&imax);
        if (vectors(imax, j) < 0) vectors.col(j) = -vectors.col(j);
    }
}

} // namespace

EigenPairs sym_eigen(const SymMatrix& m, const std::string& name) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of " + name + " did not converge");
    }
    // Eigen sorts ascending; flip to descending.
    EigenPairs pairs;
    pairs.values = solver.eigenvalues().reverse();
    pairs.vectors = solver.eigenvectors().rowwise().reverse();
    canonicalize_columns(pairs.vectors);
    return pairs;
}

EigenPairs generalized_eigen(const SymMatrix& b1, const SymMatrix& b2) {
    if (b1.dim() != b2.dim()) {
        throw ArgumentError("generalized eigenproblem needs matching dimensions, got " +
                            std::to_string(b1.dim()) + " and " + std::to_string(b2.dim()));
    }
    const Eigen::MatrixXd constraint = b1.mat() + b2.mat();
    Eigen::LLT<Eigen::MatrixXd> llt(constraint);
    if (llt.info() != Eigen::Success) {
        throw NumericError("B1 + B2 is not positive definite; "
                           "apply repair_positive_definite to the covariances first");
    }

    // Whiten: S = L^-1 B1 L^-T shares eigenvalues with the pencil, and
    // W = L^-T U turns U's orthonormality into W^T (B1+B2) W = I.
    const Eigen::MatrixXd lower = llt.matrixL();
    Eigen::MatrixXd whitened =
        lower.triangularView<Eigen::Lower>().solve(b1.mat());
    whitened = lower.triangularView<Eigen::Lower>()
                   .solve(whitened.transpose())
                   .transpose();

    EigenPairs pairs = sym_eigen(SymMatrix(whitened), "whitened B1");
    pairs.vectors = lower.transpose()
                        .triangularView<Eigen::Upper>()
                        .solve(pairs.vectors);
    canonicalize_columns(pairs.vectors);
    return pairs;
}

SymMatrix double_center(const SymMatrix& d) {
    if ((d.mat().array() < 0.0).any()) {
        throw ArgumentError("invalid distance matrix: negative entries");
    }
    const Eigen::Index c = d.dim();
    const Eigen::MatrixXd squared = d.mat().array().square();
    const Eigen::MatrixXd centering =
        Eigen::MatrixXd::Identity(c, c) - Eigen::MatrixXd::Constant(c, c, 1.0 / double(c));
    return SymMatrix(-0.5 * centering * squared * centering);
}

SymMatrix repair_positive_definite(const SymMatrix& m, double eig_tol) {
    if (!(eig_tol > 0.0)) {
        throw ArgumentError("eig_tol must be positive");
    }
    const EigenPairs pairs = sym_eigen(m, "repair candidate");
    const double max_value = pairs.values(0);
    const double min_value = pairs.values(pairs.values.size() - 1);
    if (min_value >= eig_tol * std::max(max_value, 1.0)) {
        return m;
    }
    const double floor = eig_tol * (max_value > 0.0 ? max_value : 1.0);
    const Eigen::VectorXd clipped = pairs.values.cwiseMax(floor);
    return SymMatrix(pairs.vectors * clipped.asDiagonal() * pairs.vectors.transpose());
}

} // namespace dbcsp::linalg
