#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "dbcsp/errors.hpp"

namespace dbcsp::linalg {

/// Dense symmetric matrix. Construction symmetrizes via (M + M^T)/2 and
/// rejects non-square or non-finite input.
class SymMatrix {
public:
    SymMatrix() = default;

    explicit SymMatrix(const Eigen::MatrixXd& m) {
        if (m.rows() != m.cols()) {
            throw ArgumentError("symmetric matrix must be square, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
        }
        if (!m.allFinite()) {
            throw ArgumentError("symmetric matrix contains non-finite entries");
        }
        entries_ = 0.5 * (m + m.transpose());
    }

    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXd& mat() const { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Eigen::MatrixXd entries_;
};

/// Eigenvalues sorted non-increasing, column j of vectors paired with
/// values[j]. For generalized solves the columns satisfy V^T M V = I with
/// M the constraint matrix.
struct EigenPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Symmetric eigendecomposition, values descending, vectors orthonormal.
/// Column signs are fixed so each column's largest-magnitude entry is
/// positive. `name` appears in the failure message.
EigenPairs sym_eigen(const SymMatrix& m, const std::string& name = "matrix");

/// Solves B1 w = mu (B1 + B2) w by Cholesky whitening of B1 + B2. Columns
/// are ordered by decreasing Rayleigh quotient w'B1w / w'(B1+B2)w and
/// satisfy W^T (B1+B2) W = I. B1 + B2 must be positive definite; callers
/// repair indefinite inputs first.
EigenPairs generalized_eigen(const SymMatrix& b1, const SymMatrix& b2);

/// Maps a distance matrix to the centered Gram matrix -1/2 H D^(2) H,
/// where D^(2) squares entries element-wise and H = I - (1/c) 1 1^T.
/// Output rows and columns sum to zero. Entries must be non-negative.
SymMatrix double_center(const SymMatrix& d);

/// Replaces an indefinite symmetric matrix by the nearest one whose
/// spectrum is floored at eig_tol * lambda_max (absolute eig_tol when
/// lambda_max <= 0). Matrices already satisfying
/// lambda_min >= eig_tol * max(lambda_max, 1) are returned unchanged.
SymMatrix repair_positive_definite(const SymMatrix& m, double eig_tol);

/// Default spectrum tolerance for the positive-definite repair.
inline constexpr double kDefaultEigTol = 1e-6;

} // namespace dbcsp::linalg
