#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "dbcsp/distances.hpp"
#include "dbcsp/rng.hpp"
#include "oracles.hpp"

using dbcsp::ArgumentError;
using dbcsp::ConfigError;
using dbcsp::Trial;
using namespace dbcsp::dist;

namespace {

Trial make_trial(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return Trial(m);
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// All sequences of the given length over values {0, 1, 2}.
std::vector<std::vector<double>> ternary_sequences(int length) {
    std::vector<std::vector<double>> out;
    std::vector<double> current(static_cast<std::size_t>(length), 0.0);
    int total = 1;
    for (int i = 0; i < length; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
        int rest = code;
        for (int i = 0; i < length; ++i) {
            current[static_cast<std::size_t>(i)] = rest % 3;
            rest /= 3;
        }
        out.push_back(current);
    }
    return out;
}

} // namespace

TEST_CASE("euclidean_rows") {
    const DistanceMatrix d = euclidean_rows(make_trial({{1, 0}, {0, 0}}));
    CHECK(d(0, 1) == 1.0);
    CHECK(d(1, 0) == 1.0);
    CHECK(d(0, 0) == 0.0);

    const DistanceMatrix same = euclidean_rows(make_trial({{2, 3}, {2, 3}}));
    CHECK(same.entries().cwiseAbs().maxCoeff() == 0.0);

    const DistanceMatrix triangle = euclidean_rows(make_trial({{0, 0}, {3, 4}}));
    CHECK(triangle(0, 1) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("chebyshev_rows") {
    CHECK(chebyshev_rows(make_trial({{1, 0}, {0, 0}}))(0, 1) == 1.0);
    CHECK(chebyshev_rows(make_trial({{1, -3}, {0, 0}}))(0, 1) == 3.0);
    CHECK(chebyshev_rows(make_trial({{1, 2}, {1, 2}}))(0, 1) == 0.0);
}

TEST_CASE("dtw_cost on fixed sequences") {
    CHECK(dtw_cost(to_vec({0, 0, 1}), to_vec({0, 1, 1})) == 0.0);
    CHECK(dtw_cost(to_vec({1, 2, 3}), to_vec({1, 2, 3})) == 0.0);
    CHECK(dtw_cost(to_vec({0}), to_vec({5})) == 5.0);
    // Warping beats the rigid alignment (cost 2) but the final samples
    // 0 and 1 must still pair up.
    CHECK(dtw_cost(to_vec({0, 1, 0}), to_vec({0, 0, 1})) == 1.0);
}

TEST_CASE("dtw_cost equals brute-force path enumeration") {
    SUBCASE("exhaustive over short ternary sequences") {
        for (int la = 1; la <= 3; ++la) {
            for (int lb = 1; lb <= 3; ++lb) {
                for (const auto& a : ternary_sequences(la)) {
                    for (const auto& b : ternary_sequences(lb)) {
                        CHECK(dtw_cost(to_vec(a), to_vec(b)) == oracle::dtw_brute_force(a, b));
                    }
                }
            }
        }
    }
    SUBCASE("random longer ternary pairs") {
        std::mt19937_64 rng(2024);
        for (int rep = 0; rep < 200; ++rep) {
            const auto draw = [&](std::size_t len) {
                std::vector<double> s(len);
                for (double& v : s) {
                    v = static_cast<double>(dbcsp::util::uniform_below(rng, 3));
                }
                return s;
            };
            const std::vector<double> a = draw(4 + dbcsp::util::uniform_below(rng, 3));
            const std::vector<double> b = draw(4 + dbcsp::util::uniform_below(rng, 3));
            CHECK(dtw_cost(to_vec(a), to_vec(b)) == oracle::dtw_brute_force(a, b));
        }
    }
}

TEST_CASE("dtw_rows never exceeds the rigid diagonal alignment") {
    std::mt19937_64 rng(5);
    dbcsp::util::NormalSampler normal(rng);
    Eigen::MatrixXd x(4, 12);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal();
    }
    const Trial trial(x);
    const DistanceMatrix d = dtw_rows(trial);
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            const double rigid = (x.row(i) - x.row(j)).cwiseAbs().sum();
            CHECK(d(i, j) <= rigid + 1e-12);
        }
    }
}

TEST_CASE("distance matrices are symmetric, zero-diagonal, permutation-equivariant") {
    std::mt19937_64 rng(11);
    dbcsp::util::NormalSampler normal(rng);
    Eigen::MatrixXd x(5, 9);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal();
    }
    using DistFn = DistanceMatrix (*)(const Trial&);
    for (DistFn fn : {&euclidean_rows, &dtw_rows, &chebyshev_rows}) {
        const DistanceMatrix d = fn(Trial(x));
        CHECK(d.entries() == d.entries().transpose().eval());
        CHECK(d.entries().diagonal().cwiseAbs().maxCoeff() == 0.0);
        CHECK(d.entries().minCoeff() >= 0.0);

        Eigen::MatrixXd permuted_x = x;
        permuted_x.row(0) = x.row(3);
        permuted_x.row(3) = x.row(0);
        const DistanceMatrix p = fn(Trial(permuted_x));
        CHECK(p(0, 1) == d(3, 1));
        CHECK(p(0, 3) == d(3, 0));
        CHECK(p(1, 2) == d(1, 2));
    }
}

TEST_CASE("distance_for and mixtures") {
    const Trial trial = make_trial({{0, 0, 1}, {0, 1, 1}, {5, 5, 5}});

    SUBCASE("plain dispatch") {
        DistanceSpec spec;
        spec.kind = "dtw";
        CHECK(distance_for(spec, trial).entries() == dtw_rows(trial).entries());
    }
    SUBCASE("w=1 collapses to Euclidean exactly") {
        DistanceSpec spec;
        spec.kind = "dtw";
        spec.mixture = true;
        spec.w = 1.0;
        CHECK(distance_for(spec, trial).entries() == euclidean_rows(trial).entries());
    }
    SUBCASE("half-and-half blend") {
        DistanceSpec spec;
        spec.kind = "dtw";
        spec.mixture = true;
        spec.w = 0.5;
        const DistanceMatrix blend = distance_for(spec, trial);
        const Eigen::MatrixXd expected =
            0.5 * euclidean_rows(trial).entries() + 0.5 * dtw_rows(trial).entries();
        CHECK(blend.entries() == expected);
        const Eigen::MatrixXd lo =
            euclidean_rows(trial).entries().cwiseMin(dtw_rows(trial).entries());
        const Eigen::MatrixXd hi =
            euclidean_rows(trial).entries().cwiseMax(dtw_rows(trial).entries());
        CHECK(((blend.entries() - lo).array() >= -1e-15).all());
        CHECK(((hi - blend.entries()).array() >= -1e-15).all());
    }
    SUBCASE("invalid weight") {
        DistanceSpec spec;
        spec.mixture = true;
        spec.w = 1.5;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
    }
}

TEST_CASE("kind names and the registry") {
    CHECK(canonical_kind("EUCL") == "euclidean");
    CHECK(canonical_kind("eucl") == "euclidean");
    CHECK(canonical_kind("Euclidean") == "euclidean");
    CHECK(canonical_kind("infnorm") == "chebyshev");
    CHECK(canonical_kind("DTW") == "dtw");
    CHECK_THROWS_AS(canonical_kind("mahalanobis"), ConfigError);
    CHECK_THROWS_WITH_AS(canonical_kind("nope"),
                         doctest::Contains("supported kinds"), ConfigError);

    DistanceSpec eucl;
    CHECK(eucl.is_plain_euclidean());
    DistanceSpec mixed;
    mixed.mixture = true;
    CHECK_FALSE(mixed.is_plain_euclidean());

    register_distance("manhattan", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return (a - b).cwiseAbs().sum();
    });
    CHECK(canonical_kind("manhattan") == "manhattan");
    DistanceSpec spec;
    spec.kind = "manhattan";
    const Trial trial = make_trial({{1, 1}, {0, 0}});
    CHECK(distance_for(spec, trial)(0, 1) == 2.0);

    const auto names = supported_distances();
    CHECK(std::find(names.begin(), names.end(), "euclidean") != names.end());
    CHECK(std::find(names.begin(), names.end(), "manhattan") != names.end());
}

TEST_CASE("DistanceMatrix validation") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 1) = -1.0;
    bad(1, 0) = -1.0;
    CHECK_THROWS_AS(DistanceMatrix{bad}, ArgumentError);

    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
    diag(0, 0) = 0.5;
    CHECK_THROWS_AS(DistanceMatrix{diag}, ArgumentError);

    Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
    asym(0, 1) = 1.0;
    asym(1, 0) = 2.0;
    CHECK_THROWS_AS(DistanceMatrix{asym}, ArgumentError);
}
