#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dbcsp/errors.hpp"
#include "dbcsp/trial.hpp"

namespace dbcsp::dist {

/// Pairwise distances between the signal rows of one trial: symmetric,
/// zero diagonal, non-negative, finite.
class DistanceMatrix {
public:
    explicit DistanceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
            throw ArgumentError("distance matrix must be square with dim >= 2");
        }
        if (!entries_.allFinite()) {
            throw ArgumentError("distance matrix contains non-finite entries");
        }
        if ((entries_.array() < 0.0).any()) {
            throw ArgumentError("distance matrix contains negative entries");
        }
        if (entries_.diagonal().cwiseAbs().maxCoeff() != 0.0) {
            throw ArgumentError("distance matrix diagonal must be zero");
        }
        if (entries_ != entries_.transpose().eval()) {
            throw ArgumentError("distance matrix must be symmetric");
        }
    }

    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXd& entries() const { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Eigen::MatrixXd entries_;
};

/// Distance between two equal-length signals.
using RowDistanceFn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

/// Registers a distance under a lowercase name so DistanceSpec can refer
/// to it. Re-registering an existing name replaces it.
void register_distance(const std::string& name, RowDistanceFn fn);

/// Canonical names currently registered, sorted.
std::vector<std::string> supported_distances();

/// Maps user-facing spellings to registered names: "EUCL" -> euclidean,
/// "infnorm" -> chebyshev, case-insensitive; canonical names pass through.
/// Unknown names raise ConfigError listing the supported kinds.
std::string canonical_kind(const std::string& name);

/// Which distance drives the covariance construction. A mixture blends
/// the Euclidean matrix with the selected kind entrywise:
/// D = w * D_euclidean + (1 - w) * D_kind.
struct DistanceSpec {
    std::string kind = "euclidean";
    bool mixture = false;
    double w = 0.5;

    /// Resolves the kind to its canonical name and checks w in [0, 1].
    void validate() const;

    bool is_plain_euclidean() const { return !mixture && canonical_kind(kind) == "euclidean"; }
};

/// Pairwise matrix from an arbitrary row distance. The pair loop may run
/// on several threads; output is identical to the sequential computation.
DistanceMatrix pairwise_rows(const Trial& x, const RowDistanceFn& fn);

/// l2 distance between every pair of signal rows.
DistanceMatrix euclidean_rows(const Trial& x);

/// Classic unconstrained dynamic time warping with absolute-difference
/// local cost and match/insert/delete steps; the summed cost of the
/// optimal path, no normalization.
DistanceMatrix dtw_rows(const Trial& x);

/// max_t |x_it - x_jt| for every pair of signal rows.
DistanceMatrix chebyshev_rows(const Trial& x);

/// DTW cost between two signals (exposed for oracle tests).
double dtw_cost(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Distance matrix for a trial according to spec, blending with the
/// Euclidean matrix when spec.mixture is set.
DistanceMatrix distance_for(const DistanceSpec& spec, const Trial& x);

} // namespace dbcsp::dist
