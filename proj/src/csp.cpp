#include "dbcsp/csp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dbcsp/parallel.hpp"

namespace dbcsp::csp {

CspFilters CspFilters::head_pairs(int keep) const {
    if (keep < 1 || keep > q) {
        throw ArgumentError("selected dimension must lie in [1, " + std::to_string(q) +
                            "], got " + std::to_string(keep));
    }
    CspFilters out;
    out.q = keep;
    out.distance = distance;
    out.W.resize(W.rows(), 2 * keep);
    out.eigenvalues.resize(2 * keep);
    out.W.leftCols(keep) = W.leftCols(keep);
    out.W.rightCols(keep) = W.middleCols(q, keep);
    out.eigenvalues.head(keep) = eigenvalues.head(keep);
    out.eigenvalues.tail(keep) = eigenvalues.segment(q, keep);
    return out;
}

FeatureKind feature_kind_from_string(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "log_variance" || lower == "logvar") return FeatureKind::LogVariance;
    if (lower == "variance" || lower == "var") return FeatureKind::Variance;
    if (lower == "max") return FeatureKind::Max;
    if (lower == "min") return FeatureKind::Min;
    if (lower == "iqr") return FeatureKind::Iqr;
    throw ConfigError("unknown feature \"" + name +
                      "\"; supported: log_variance variance max min iqr");
}

std::string to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::LogVariance: return "log_variance";
        case FeatureKind::Variance: return "variance";
        case FeatureKind::Max: return "max";
        case FeatureKind::Min: return "min";
        case FeatureKind::Iqr: return "iqr";
    }
    throw ArgumentError("invalid feature kind");
}

void FeatureSpec::validate() const {
    if (kinds.empty()) {
        throw ConfigError("feature spec must name at least one statistic");
    }
    std::set<FeatureKind> seen;
    for (FeatureKind kind : kinds) {
        if (!seen.insert(kind).second) {
            throw ConfigError("feature \"" + to_string(kind) + "\" listed twice");
        }
    }
}

FeatureSpec FeatureSpec::parse(const std::vector<std::string>& names) {
    FeatureSpec spec;
    spec.kinds.clear();
    for (const std::string& name : names) spec.kinds.push_back(feature_kind_from_string(name));
    spec.validate();
    return spec;
}

Trial standardize_trial(const Trial& x) {
    const double trace = x.data().squaredNorm();
    if (trace <= 0.0) {
        throw DataError("degenerate trial: all entries are zero");
    }
    const double scale = std::sqrt(static_cast<double>(x.channels()) / trace);
    if (scale == 1.0) return x;
    return Trial(x.data() * scale);
}

namespace {

// Per-trial contributions are computed independently (possibly in
// parallel) and reduced in index order, so thread count never changes
// the result.
linalg::SymMatrix average_contributions(
    const std::vector<Trial>& trials,
    const std::function<Eigen::MatrixXd(const Trial&)>& contribution) {
    const Eigen::Index c = trials.front().channels();
    std::vector<Eigen::MatrixXd> parts(trials.size());
    util::parallel_for(trials.size(), [&](std::size_t i) { parts[i] = contribution(trials[i]); });
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(c, c);
    for (const Eigen::MatrixXd& part : parts) sum += part;
    return linalg::SymMatrix(sum / static_cast<double>(trials.size()));
}

} // namespace

linalg::SymMatrix class_covariance_classical(const std::vector<Trial>& trials) {
    if (trials.empty()) {
        throw ArgumentError("covariance needs at least one trial");
    }
    return average_contributions(
        trials, [](const Trial& t) { return Eigen::MatrixXd(t.data() * t.data().transpose()); });
}

linalg::SymMatrix class_covariance_db(const std::vector<Trial>& trials,
                                      const dist::DistanceSpec& spec, double eig_tol) {
    if (trials.empty()) {
        throw ArgumentError("covariance needs at least one trial");
    }
    spec.validate();
    const linalg::SymMatrix average = average_contributions(trials, [&](const Trial& t) {
        const dist::DistanceMatrix d = dist::distance_for(spec, t);
        const linalg::SymMatrix gram = linalg::double_center(linalg::SymMatrix(d.entries()));
        const Eigen::Index c = t.channels();
        // Mean signal across channels and the rank-one terms that restore
        // what double centering removed.
        const Eigen::VectorXd mean_signal = t.data().colwise().mean();
        const Eigen::VectorXd channel_dot = t.data() * mean_signal;
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(c);
        return Eigen::MatrixXd(gram.mat() + channel_dot * ones.transpose() +
                               ones * channel_dot.transpose() -
                               mean_signal.squaredNorm() * ones * ones.transpose());
    });
    return linalg::repair_positive_definite(average, eig_tol);
}

CspDecomposition decompose(const LabeledDataset& data, const dist::DistanceSpec& spec,
                           double eig_tol) {
    spec.validate();
    auto standardize_all = [](const std::vector<Trial>& trials) {
        std::vector<Trial> out;
        out.reserve(trials.size());
        for (const Trial& t : trials) out.push_back(standardize_trial(t));
        return out;
    };
    const std::vector<Trial> class1 = standardize_all(data.class1());
    const std::vector<Trial> class2 = standardize_all(data.class2());

    auto covariance = [&](const std::vector<Trial>& trials) {
        if (spec.is_plain_euclidean()) {
            return linalg::repair_positive_definite(class_covariance_classical(trials), eig_tol);
        }
        return class_covariance_db(trials, spec, eig_tol);
    };
    linalg::SymMatrix b1 = covariance(class1);
    linalg::SymMatrix b2 = covariance(class2);
    linalg::EigenPairs pairs = linalg::generalized_eigen(b1, b2);
    return CspDecomposition{std::move(b1), std::move(b2), std::move(pairs)};
}

CspFilters filters_from_decomposition(const linalg::EigenPairs& pairs, int q,
                                      const dist::DistanceSpec& spec) {
    const Eigen::Index c = pairs.vectors.cols();
    if (q < 1 || 2 * static_cast<Eigen::Index>(q) > c) {
        throw ArgumentError("q must satisfy 1 <= 2q <= channels; got q=" + std::to_string(q) +
                            " with " + std::to_string(c) + " channels");
    }
    CspFilters filters;
    filters.q = q;
    filters.distance = spec;
    filters.W.resize(pairs.vectors.rows(), 2 * q);
    filters.eigenvalues.resize(2 * q);
    filters.W.leftCols(q) = pairs.vectors.leftCols(q);
    filters.eigenvalues.head(q) = pairs.values.head(q);
    // b_j is the j-th eigenvector from the bottom: column q+1 holds the
    // very last one.
    for (int j = 0; j < q; ++j) {
        filters.W.col(q + j) = pairs.vectors.col(c - 1 - j);
        filters.eigenvalues(q + j) = pairs.values(c - 1 - j);
    }
    return filters;
}

CspFilters compute_filters(const LabeledDataset& data, int q, const dist::DistanceSpec& spec,
                           double eig_tol) {
    if (q < 1 || 2 * static_cast<Eigen::Index>(q) > data.channels()) {
        throw ArgumentError("q must satisfy 1 <= 2q <= channels; got q=" + std::to_string(q) +
                            " with " + std::to_string(data.channels()) + " channels");
    }
    const CspDecomposition decomposition = decompose(data, spec, eig_tol);
    return filters_from_decomposition(decomposition.pairs, q, spec);
}

Trial project(const Trial& x, const CspFilters& filters) {
    if (x.channels() != filters.channels()) {
        throw ArgumentError("trial has " + std::to_string(x.channels()) +
                            " channels but filters expect " + std::to_string(filters.channels()));
    }
    return Trial(filters.W.transpose() * x.data());
}

double sample_variance(const Eigen::VectorXd& values) {
    if (values.size() < 2) {
        throw DataError("degenerate trial: variance needs at least 2 samples");
    }
    const double mean = values.mean();
    return (values.array() - mean).square().sum() / static_cast<double>(values.size() - 1);
}

double interpolated_quantile(const Eigen::VectorXd& values, double p) {
    std::vector<double> sorted(values.data(), values.data() + values.size());
    std::sort(sorted.begin(), sorted.end());
    const double position = p * static_cast<double>(sorted.size() - 1);
    const auto lower = static_cast<std::size_t>(std::floor(position));
    const auto upper = static_cast<std::size_t>(std::ceil(position));
    const double fraction = position - static_cast<double>(lower);
    return sorted[lower] + fraction * (sorted[upper] - sorted[lower]);
}

Eigen::VectorXd extract_features(const Trial& projected, const FeatureSpec& spec) {
    spec.validate();
    const Eigen::Index rows = projected.channels();
    Eigen::VectorXd features(static_cast<Eigen::Index>(spec.kinds.size()) * rows);
    Eigen::Index at = 0;
    for (FeatureKind kind : spec.kinds) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Eigen::VectorXd row = projected.data().row(r);
            double value = 0.0;
            switch (kind) {
                case FeatureKind::LogVariance:
                    value = std::log(std::max(sample_variance(row), kVarianceFloor));
                    break;
                case FeatureKind::Variance:
                    value = sample_variance(row);
                    break;
                case FeatureKind::Max:
                    value = row.maxCoeff();
                    break;
                case FeatureKind::Min:
                    value = row.minCoeff();
                    break;
                case FeatureKind::Iqr:
                    value = interpolated_quantile(row, 0.75) - interpolated_quantile(row, 0.25);
                    break;
            }
            features(at++) = value;
        }
    }
    return features;
}

} // namespace dbcsp::csp
