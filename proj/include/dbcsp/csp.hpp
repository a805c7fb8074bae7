#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dbcsp/distances.hpp"
#include "dbcsp/linalg.hpp"
#include "dbcsp/trial.hpp"

namespace dbcsp::csp {

/// Spatial filters for a two-class problem. W has 2q columns: columns
/// 1..q are a_1..a_q (largest Rayleigh quotients, class-1 variance
/// maximizers) and columns q+1..2q are b_1..b_q (smallest, in ascending
/// distance from the bottom, so column q+1 is b_1). eigenvalues holds the
/// matching generalized eigenvalues.
struct CspFilters {
    int q = 0;
    Eigen::MatrixXd W;
    Eigen::VectorXd eigenvalues;
    dist::DistanceSpec distance;

    Eigen::Index channels() const { return W.rows(); }

    /// Filters restricted to the first/last `keep` pairs (a_1..a_keep,
    /// b_1..b_keep). keep must satisfy 1 <= keep <= q.
    CspFilters head_pairs(int keep) const;
};

/// Per-signal summary statistics computed on projected trials.
enum class FeatureKind { LogVariance, Variance, Max, Min, Iqr };

/// Parses log_variance|logvar, variance|var, max, min, iqr
/// (case-insensitive).
FeatureKind feature_kind_from_string(const std::string& name);
std::string to_string(FeatureKind kind);

/// Ordered, duplicate-free set of statistics to extract. Defaults to the
/// classical log-variance feature.
struct FeatureSpec {
    std::vector<FeatureKind> kinds = {FeatureKind::LogVariance};

    void validate() const;
    static FeatureSpec parse(const std::vector<std::string>& names);
};

/// Smallest variance fed to the log; constant signals map to ln(1e-12).
inline constexpr double kVarianceFloor = 1e-12;

/// Scales a trial so that tr(x x^T) equals the channel count. All-zero
/// trials are rejected.
Trial standardize_trial(const Trial& x);

/// Average of X X^T over standardized trials.
linalg::SymMatrix class_covariance_classical(const std::vector<Trial>& trials);

/// Distance-based covariance: per trial, the double-centered Gram matrix
/// of the chosen distance plus the mean-signal reconstruction terms,
/// averaged and repaired to positive definite. With the Euclidean
/// distance this reproduces the classical covariance.
linalg::SymMatrix class_covariance_db(const std::vector<Trial>& trials,
                                      const dist::DistanceSpec& spec, double eig_tol);

/// Repaired class covariances for a dataset (classical construction when
/// spec is plain Euclidean, distance-based otherwise) and the full
/// generalized eigendecomposition they induce. Exposed so that dimension
/// sweeps can slice one decomposition instead of refitting per q.
struct CspDecomposition {
    linalg::SymMatrix b1;
    linalg::SymMatrix b2;
    linalg::EigenPairs pairs;
};

CspDecomposition decompose(const LabeledDataset& data, const dist::DistanceSpec& spec,
                           double eig_tol = linalg::kDefaultEigTol);

/// First q and last q columns of a full decomposition, with the last
/// block reversed so column q+j is b_j.
CspFilters filters_from_decomposition(const linalg::EigenPairs& pairs, int q,
                                      const dist::DistanceSpec& spec);

/// Standardizes all trials, builds and repairs both class covariances,
/// solves the generalized eigenproblem and keeps the first and last q
/// eigenvectors. Requires 2q <= channel count.
CspFilters compute_filters(const LabeledDataset& data, int q, const dist::DistanceSpec& spec,
                           double eig_tol = linalg::kDefaultEigTol);

/// W^T x: the 2q filtered signals of a trial.
Trial project(const Trial& x, const CspFilters& filters);

/// Per projected signal, each requested statistic; concatenated in kind
/// order, then signal order within a kind. Variance uses the unbiased
/// denominator T - 1; quartiles interpolate linearly.
Eigen::VectorXd extract_features(const Trial& projected, const FeatureSpec& spec);

/// Sample variance with denominator T - 1.
double sample_variance(const Eigen::VectorXd& values);

/// Linearly interpolated quantile of unsorted values, p in [0, 1].
double interpolated_quantile(const Eigen::VectorXd& values, double p);

} // namespace dbcsp::csp
