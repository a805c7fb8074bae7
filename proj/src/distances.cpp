#include "dbcsp/distances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "dbcsp/parallel.hpp"

namespace dbcsp::dist {

namespace {

double euclidean_cost(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm();
}

double chebyshev_cost(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

struct Registry {
    std::mutex mutex;
    std::map<std::string, RowDistanceFn> fns;

    Registry() {
        fns["euclidean"] = euclidean_cost;
        fns["dtw"] = dtw_cost;
        fns["chebyshev"] = chebyshev_cost;
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

RowDistanceFn lookup(const std::string& kind) {
    const std::string canonical = canonical_kind(kind);
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    return r.fns.at(canonical);
}

} // namespace

void register_distance(const std::string& name, RowDistanceFn fn) {
    if (name.empty() || !fn) {
        throw ArgumentError("distance registration needs a name and a callable");
    }
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    r.fns[lowercase(name)] = std::move(fn);
}

std::vector<std::string> supported_distances() {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    std::vector<std::string> names;
    names.reserve(r.fns.size());
    for (const auto& [name, fn] : r.fns) names.push_back(name);
    return names;
}

std::string canonical_kind(const std::string& name) {
    std::string lower = lowercase(name);
    if (lower == "eucl") lower = "euclidean";
    if (lower == "infnorm") lower = "chebyshev";
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    if (!r.fns.count(lower)) {
        std::ostringstream msg;
        msg << "unsupported distance \"" << name << "\"; supported kinds:";
        for (const auto& [known, fn] : r.fns) msg << " " << known;
        throw ConfigError(msg.str());
    }
    return lower;
}

void DistanceSpec::validate() const {
    canonical_kind(kind);
    if (!(w >= 0.0 && w <= 1.0)) {
        throw ConfigError("mixture weight w must lie in [0, 1], got " + std::to_string(w));
    }
}

double dtw_cost(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index n = a.size();
    const Eigen::Index m = b.size();
    // One rolling row of the accumulated-cost table.
    std::vector<double> prev(static_cast<std::size_t>(m)), curr(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
        const double cost = std::abs(a(0) - b(j));
        prev[j] = cost + (j > 0 ? prev[j - 1] : 0.0);
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        curr[0] = std::abs(a(i) - b(0)) + prev[0];
        for (Eigen::Index j = 1; j < m; ++j) {
            const double best = std::min({prev[j], curr[j - 1], prev[j - 1]});
            curr[j] = std::abs(a(i) - b(j)) + best;
        }
        std::swap(prev, curr);
    }
    return prev[m - 1];
}

DistanceMatrix pairwise_rows(const Trial& x, const RowDistanceFn& fn) {
    const Eigen::Index c = x.channels();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(c, c);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    pairs.reserve(static_cast<std::size_t>(c * (c - 1) / 2));
    for (Eigen::Index i = 0; i < c; ++i) {
        for (Eigen::Index j = i + 1; j < c; ++j) pairs.emplace_back(i, j);
    }
    util::parallel_for(pairs.size(), [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const double value = fn(x.data().row(i), x.data().row(j));
        d(i, j) = value;
        d(j, i) = value;
    });
    return DistanceMatrix(std::move(d));
}

DistanceMatrix euclidean_rows(const Trial& x) { return pairwise_rows(x, euclidean_cost); }

DistanceMatrix dtw_rows(const Trial& x) { return pairwise_rows(x, dtw_cost); }

DistanceMatrix chebyshev_rows(const Trial& x) { return pairwise_rows(x, chebyshev_cost); }

DistanceMatrix distance_for(const DistanceSpec& spec, const Trial& x) {
    spec.validate();
    const DistanceMatrix base = pairwise_rows(x, lookup(spec.kind));
    if (!spec.mixture) return base;
    const DistanceMatrix eucl = euclidean_rows(x);
    return DistanceMatrix(spec.w * eucl.entries() + (1.0 - spec.w) * base.entries());
}

} // namespace dbcsp::dist
