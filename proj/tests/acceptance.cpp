// End-to-end acceptance suite. Each numbered criterion prints exactly one
// PASS / FAIL / SKIP line; the process exits non-zero when any criterion
// fails. Tolerances are pinned here and should not be loosened casually.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dbcsp/classify.hpp"
#include "dbcsp/dataio.hpp"
#include "dbcsp/distances.hpp"
#include "dbcsp/rng.hpp"
#include "oracles.hpp"
#include "runner.hpp"

namespace fs = std::filesystem;
using dbcsp::LabeledDataset;
using dbcsp::Trial;

namespace {

/// Collects the first few failure notes of one criterion.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) {
            if (!note_.empty()) note_ += "; ";
            note_ += what;
        }
    }

    bool ok() const { return failures_ == 0; }

    std::string note() const {
        if (failures_ > 3) {
            return note_ + "; and " + std::to_string(failures_ - 3) + " more";
        }
        return note_;
    }

private:
    int failures_ = 0;
    std::string note_;
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Trial random_trial(int channels, int samples, std::mt19937_64& rng) {
    dbcsp::util::NormalSampler normal(rng);
    Eigen::MatrixXd m(channels, samples);
    for (int i = 0; i < channels; ++i) {
        for (int j = 0; j < samples; ++j) m(i, j) = normal();
    }
    return Trial(m);
}

LabeledDataset random_dataset(int channels, int samples, int n1, int n2, std::mt19937_64& rng) {
    std::vector<Trial> class1;
    std::vector<Trial> class2;
    for (int i = 0; i < n1; ++i) class1.push_back(random_trial(channels, samples, rng));
    for (int i = 0; i < n2; ++i) class2.push_back(random_trial(channels, samples, rng));
    return LabeledDataset("C1", "C2", std::move(class1), std::move(class2));
}

double column_difference_up_to_sign(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

// ---- criterion 1 + 2: euclidean reduction and the identity constraint ----

struct FiltersWithCovariances {
    dbcsp::csp::CspFilters filters;
    Eigen::MatrixXd constraint;  // B1 + B2 used for the fit
};

FiltersWithCovariances classical_route(const LabeledDataset& data, int q) {
    dbcsp::dist::DistanceSpec eucl;
    const dbcsp::csp::CspDecomposition d = dbcsp::csp::decompose(data, eucl);
    return {dbcsp::csp::filters_from_decomposition(d.pairs, q, eucl),
            d.b1.mat() + d.b2.mat()};
}

FiltersWithCovariances db_route(const LabeledDataset& data, int q,
                                const dbcsp::dist::DistanceSpec& spec) {
    std::vector<Trial> s1;
    std::vector<Trial> s2;
    for (const Trial& t : data.class1()) s1.push_back(dbcsp::csp::standardize_trial(t));
    for (const Trial& t : data.class2()) s2.push_back(dbcsp::csp::standardize_trial(t));
    const dbcsp::linalg::SymMatrix b1 =
        dbcsp::csp::class_covariance_db(s1, spec, dbcsp::linalg::kDefaultEigTol);
    const dbcsp::linalg::SymMatrix b2 =
        dbcsp::csp::class_covariance_db(s2, spec, dbcsp::linalg::kDefaultEigTol);
    const dbcsp::linalg::EigenPairs pairs = dbcsp::linalg::generalized_eigen(b1, b2);
    return {dbcsp::csp::filters_from_decomposition(pairs, q, spec), b1.mat() + b2.mat()};
}

double constraint_residual(const FiltersWithCovariances& fit) {
    const Eigen::MatrixXd gram = fit.filters.W.transpose() * fit.constraint * fit.filters.W;
    const Eigen::Index k = gram.rows();
    return (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
}

std::vector<double> projected_variances(const LabeledDataset& data,
                                        const dbcsp::csp::CspFilters& filters) {
    std::vector<double> variances;
    for (const auto* cls : {&data.class1(), &data.class2()}) {
        for (const Trial& t : *cls) {
            const Trial projected =
                dbcsp::csp::project(dbcsp::csp::standardize_trial(t), filters);
            for (Eigen::Index r = 0; r < projected.channels(); ++r) {
                variances.push_back(dbcsp::csp::sample_variance(projected.data().row(r)));
            }
        }
    }
    return variances;
}

void criterion_1_and_2(Checker& c1, Checker& c2) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1000);
    for (int rep = 0; rep < 50; ++rep) {
        const int c = 4 + static_cast<int>(dbcsp::util::uniform_below(rng, 7));     // 4..10
        const int t = 20 + static_cast<int>(dbcsp::util::uniform_below(rng, 81));   // 20..100
        const int n1 = 5 + static_cast<int>(dbcsp::util::uniform_below(rng, 16));   // 5..20
        const int n2 = 5 + static_cast<int>(dbcsp::util::uniform_below(rng, 16));
        const LabeledDataset data = random_dataset(c, t, n1, n2, rng);
        const int q = c / 2;

        dbcsp::dist::DistanceSpec eucl;
        const FiltersWithCovariances classical = classical_route(data, q);
        const FiltersWithCovariances db = db_route(data, q, eucl);

        for (Eigen::Index j = 0; j < classical.filters.W.cols(); ++j) {
            const double diff = column_difference_up_to_sign(classical.filters.W.col(j),
                                                             db.filters.W.col(j));
            const double scale = std::max(1.0, classical.filters.W.col(j).cwiseAbs().maxCoeff());
            c1.expect(diff <= 1e-6 * scale,
                      "rep " + std::to_string(rep) + " column " + std::to_string(j) +
                          " differs by " + std::to_string(diff));
        }

        const std::vector<double> va = projected_variances(data, classical.filters);
        const std::vector<double> vb = projected_variances(data, db.filters);
        for (std::size_t i = 0; i < va.size(); ++i) {
            c1.expect(std::abs(va[i] - vb[i]) <= 1e-8 * std::max(1.0, std::abs(va[i])),
                      "rep " + std::to_string(rep) + " projected variance " + std::to_string(i) +
                          " differs by " + std::to_string(std::abs(va[i] - vb[i])));
        }

        c2.expect(constraint_residual(classical) <= 1e-8,
                  "rep " + std::to_string(rep) + " classical residual " +
                      std::to_string(constraint_residual(classical)));
        c2.expect(constraint_residual(db) <= 1e-8,
                  "rep " + std::to_string(rep) + " db residual " +
                      std::to_string(constraint_residual(db)));

        // Non-euclidean fits must satisfy the constraint as well; these are
        // slower, so probe a subset.
        if (rep % 10 == 0) {
            for (const char* kind : {"dtw", "chebyshev"}) {
                dbcsp::dist::DistanceSpec spec;
                spec.kind = kind;
                spec.mixture = (rep % 20 == 0);
                const FiltersWithCovariances fit = db_route(data, q, spec);
                c2.expect(constraint_residual(fit) <= 1e-8,
                          std::string(kind) + " residual " +
                              std::to_string(constraint_residual(fit)) + " at rep " +
                              std::to_string(rep));
            }
        }
    }
    const double elapsed = seconds_since(start);
    c1.expect(elapsed < 30.0, "took " + std::to_string(elapsed) + " s, limit 30");
}

// ---- criterion 3: DTW against exhaustive path enumeration ----------------

void criterion_3(Checker& c) {
    std::vector<std::vector<double>> short_sequences;
    for (int len = 1; len <= 3; ++len) {
        const int total = static_cast<int>(std::pow(3, len));
        for (int code = 0; code < total; ++code) {
            std::vector<double> seq(static_cast<std::size_t>(len));
            int rest = code;
            for (int i = 0; i < len; ++i) {
                seq[static_cast<std::size_t>(i)] = rest % 3;
                rest /= 3;
            }
            short_sequences.push_back(std::move(seq));
        }
    }

    auto check_pair = [&](const std::vector<double>& a, const std::vector<double>& b) {
        const Eigen::VectorXd va = Eigen::Map<const Eigen::VectorXd>(
            a.data(), static_cast<Eigen::Index>(a.size()));
        const Eigen::VectorXd vb = Eigen::Map<const Eigen::VectorXd>(
            b.data(), static_cast<Eigen::Index>(b.size()));
        const double got = dbcsp::dist::dtw_cost(va, vb);
        const double expected = oracle::dtw_brute_force(a, b);
        c.expect(got == expected, "dtw " + std::to_string(got) + " != oracle " +
                                      std::to_string(expected));
    };

    for (const auto& a : short_sequences) {
        for (const auto& b : short_sequences) check_pair(a, b);
    }

    std::mt19937_64 rng(300);
    for (int rep = 0; rep < 200; ++rep) {
        const auto draw = [&rng] {
            std::vector<double> seq(4 + dbcsp::util::uniform_below(rng, 3));  // lengths 4..6
            for (double& v : seq) v = static_cast<double>(dbcsp::util::uniform_below(rng, 3));
            return seq;
        };
        check_pair(draw(), draw());
    }
}

// ---- criterion 4: positive-definite repair oracle -------------------------

void criterion_4(Checker& c) {
    std::mt19937_64 rng(400);
    dbcsp::util::NormalSampler normal(rng);
    for (int rep = 0; rep < 100; ++rep) {
        const int dim = 2 + static_cast<int>(dbcsp::util::uniform_below(rng, 7));
        Eigen::MatrixXd m(dim, dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) m(i, j) = normal();
        }
        m = Eigen::MatrixXd(0.5 * (m + m.transpose()));
        // Shift the spectrum so at least one eigenvalue is negative.
        const oracle::JacobiResult spectrum = oracle::jacobi_eigen(m);
        const double max_abs = std::max(std::abs(spectrum.values(0)),
                                        std::abs(spectrum.values(dim - 1)));
        m.diagonal().array() -= spectrum.values(dim - 1) + 0.1 * max_abs + 0.5;

        const dbcsp::linalg::SymMatrix repaired =
            dbcsp::linalg::repair_positive_definite(dbcsp::linalg::SymMatrix(m), 1e-6);
        const Eigen::MatrixXd expected = oracle::repair_oracle(m, 1e-6);
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        const double diff = (repaired.mat() - expected).cwiseAbs().maxCoeff();
        c.expect(diff <= 1e-10 * scale,
                 "rep " + std::to_string(rep) + " differs from the oracle by " +
                     std::to_string(diff));

        const oracle::JacobiResult after = oracle::jacobi_eigen(repaired.mat());
        c.expect(after.values(dim - 1) > 0.0,
                 "rep " + std::to_string(rep) + " is not positive definite after repair");

        const dbcsp::linalg::SymMatrix twice =
            dbcsp::linalg::repair_positive_definite(repaired, 1e-6);
        const double drift = (twice.mat() - repaired.mat()).cwiseAbs().maxCoeff();
        c.expect(drift <= 1e-12 * scale,
                 "rep " + std::to_string(rep) + " not idempotent, drift " +
                     std::to_string(drift));
    }
}

// ---- criterion 5: synthetic end-to-end ------------------------------------

LabeledDataset permute_labels(const LabeledDataset& data, std::uint64_t seed) {
    std::vector<Trial> all = data.class1();
    all.insert(all.end(), data.class2().begin(), data.class2().end());
    std::mt19937_64 rng(seed);
    const std::vector<std::size_t> perm = dbcsp::util::random_permutation(all.size(), rng);
    std::vector<Trial> class1;
    std::vector<Trial> class2;
    for (std::size_t i = 0; i < all.size(); ++i) {
        (i < data.class1().size() ? class1 : class2).push_back(all[perm[i]]);
    }
    return LabeledDataset(data.label1(), data.label2(), std::move(class1), std::move(class2));
}

void criterion_5(Checker& c) {
    const auto start = std::chrono::steady_clock::now();
    dbcsp::io::SyntheticSpec spec;
    spec.channels = 6;
    spec.samples = 200;
    spec.n1 = 30;
    spec.n2 = 30;
    spec.variance_ratio = 10.0;
    spec.noise_sd = 0.1;
    spec.seed = 7;
    const LabeledDataset data = dbcsp::io::generate_synthetic(spec);

    dbcsp::dist::DistanceSpec eucl;
    dbcsp::csp::FeatureSpec fspec;
    dbcsp::classify::CvConfig cfg;
    cfg.folds = 5;
    cfg.seed = 7;
    const dbcsp::classify::CvReport report =
        dbcsp::classify::cross_validate(data, 1, eucl, fspec, cfg);
    c.expect(report.mean_acc >= 0.95,
             "mean accuracy " + std::to_string(report.mean_acc) + " < 0.95");

    const LabeledDataset shuffled = permute_labels(data, 99);
    const dbcsp::classify::CvReport chance =
        dbcsp::classify::cross_validate(shuffled, 1, eucl, fspec, cfg);
    c.expect(chance.mean_acc >= 0.3 && chance.mean_acc <= 0.7,
             "permuted-label accuracy " + std::to_string(chance.mean_acc) +
                 " outside [0.3, 0.7]");

    const double elapsed = seconds_since(start);
    c.expect(elapsed < 10.0, "took " + std::to_string(elapsed) + " s, limit 10");
}

// ---- criterion 6: feature oracle ------------------------------------------

void criterion_6(Checker& c) {
    std::mt19937_64 rng(600);
    dbcsp::csp::FeatureSpec spec;
    spec.kinds = {dbcsp::csp::FeatureKind::LogVariance, dbcsp::csp::FeatureKind::Variance,
                  dbcsp::csp::FeatureKind::Max, dbcsp::csp::FeatureKind::Min,
                  dbcsp::csp::FeatureKind::Iqr};
    for (int rep = 0; rep < 1000; ++rep) {
        const int rows = 2 + static_cast<int>(dbcsp::util::uniform_below(rng, 6));
        const int cols = 2 + static_cast<int>(dbcsp::util::uniform_below(rng, 40));
        const Trial trial = random_trial(rows, cols, rng);
        const Eigen::VectorXd got = dbcsp::csp::extract_features(trial, spec);
        const std::vector<double> expected = oracle::naive_features(trial, spec.kinds);
        for (Eigen::Index i = 0; i < got.size(); ++i) {
            const double want = expected[static_cast<std::size_t>(i)];
            c.expect(std::abs(got(i) - want) <= 1e-12 * std::max(1.0, std::abs(want)),
                     "rep " + std::to_string(rep) + " feature " + std::to_string(i) +
                         ": " + std::to_string(got(i)) + " vs " + std::to_string(want));
        }
    }
}

// ---- criterion 7: LDA closed form and translation invariance --------------

void criterion_7(Checker& c) {
    Eigen::MatrixXd x(4, 1);
    x << -2, -1, 1, 2;
    const dbcsp::classify::LdaModel model =
        dbcsp::classify::lda_fit(x, {0, 0, 1, 1}, "A", "B");
    c.expect(model.mean1(0) == -1.5, "mean1 != -1.5");
    c.expect(model.mean2(0) == 1.5, "mean2 != 1.5");
    c.expect(model.pooled_cov.mat()(0, 0) == 0.5, "pooled covariance != 0.5");
    c.expect(model.ridge == 0.0, "unexpected ridge");

    Eigen::MatrixXd probe(3, 1);
    probe << 0.6, -1.5, 0.0;
    const dbcsp::classify::LdaPrediction pred = dbcsp::classify::lda_predict(model, probe);
    c.expect(pred.labels[0] == "B", "x=0.6 not assigned to B");
    c.expect(pred.labels[1] == "A", "x=-1.5 not assigned to A");
    c.expect(pred.labels[2] == "A", "tie at the boundary not assigned to the first label");

    std::mt19937_64 rng(700);
    dbcsp::util::NormalSampler normal(rng);
    for (int rep = 0; rep < 50; ++rep) {
        const int p = 1 + static_cast<int>(dbcsp::util::uniform_below(rng, 4));
        const int per_class = 4 + static_cast<int>(dbcsp::util::uniform_below(rng, 8));
        Eigen::MatrixXd features(2 * per_class, p);
        std::vector<int> index;
        for (int i = 0; i < 2 * per_class; ++i) {
            const double center = i < per_class ? 0.0 : 3.0;
            index.push_back(i < per_class ? 0 : 1);
            for (int j = 0; j < p; ++j) features(i, j) = center + normal();
        }
        Eigen::MatrixXd probes(6, p);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < p; ++j) probes(i, j) = 1.5 + 2.0 * normal();
        }
        Eigen::RowVectorXd shift(p);
        for (int j = 0; j < p; ++j) shift(j) = 50.0 * normal();

        const dbcsp::classify::LdaModel base = dbcsp::classify::lda_fit(features, index, "A", "B");
        const dbcsp::classify::LdaModel moved = dbcsp::classify::lda_fit(
            Eigen::MatrixXd(features.rowwise() + shift), index, "A", "B");
        const auto before = dbcsp::classify::lda_predict(base, probes);
        const auto after =
            dbcsp::classify::lda_predict(moved, Eigen::MatrixXd(probes.rowwise() + shift));
        c.expect(before.labels == after.labels,
                 "labels changed under translation at rep " + std::to_string(rep));
    }
}

// ---- criterion 8: persistence ---------------------------------------------

void criterion_8(Checker& c) {
    const fs::path dir = testutil::fresh_temp_dir("accept_persist");
    dbcsp::io::SyntheticSpec spec;
    spec.channels = 6;
    spec.samples = 100;
    spec.n1 = 10;
    spec.n2 = 10;
    spec.seed = 8;
    const LabeledDataset data = dbcsp::io::generate_synthetic(spec);

    const fs::path manifest = dbcsp::io::save_dataset(data, dir / "ds");
    const LabeledDataset loaded = dbcsp::io::load_dataset(manifest);
    for (std::size_t i = 0; i < data.class1().size(); ++i) {
        c.expect(loaded.class1()[i].data() == data.class1()[i].data(),
                 "class 1 trial " + std::to_string(i) + " changed in the round-trip");
    }
    for (std::size_t i = 0; i < data.class2().size(); ++i) {
        c.expect(loaded.class2()[i].data() == data.class2()[i].data(),
                 "class 2 trial " + std::to_string(i) + " changed in the round-trip");
    }

    dbcsp::dist::DistanceSpec eucl;
    dbcsp::csp::FeatureSpec fspec;
    dbcsp::classify::CvConfig cfg;
    cfg.folds = 5;
    cfg.seed = 8;
    const dbcsp::classify::CspPipelineModel model =
        dbcsp::classify::train_pipeline(data, 3, 2, eucl, fspec, cfg);
    const fs::path model_path = dir / "model.json";
    dbcsp::io::save_model(model, model_path);
    const dbcsp::classify::CspPipelineModel restored = dbcsp::io::load_model(model_path);

    c.expect(restored.filters.W == model.filters.W, "filters changed in the round-trip");
    c.expect(restored.filters.eigenvalues == model.filters.eigenvalues,
             "eigenvalues changed in the round-trip");
    c.expect(restored.lda.mean1 == model.lda.mean1 && restored.lda.mean2 == model.lda.mean2,
             "LDA means changed in the round-trip");
    c.expect(restored.lda.pooled_cov.mat() == model.lda.pooled_cov.mat(),
             "pooled covariance changed in the round-trip");

    std::vector<Trial> probes = data.class1();
    probes.insert(probes.end(), data.class2().begin(), data.class2().end());
    const auto before = dbcsp::classify::predict_pipeline(model, probes);
    const auto after = dbcsp::classify::predict_pipeline(restored, probes);
    c.expect(before.labels == after.labels, "labels differ after the save/load cycle");
    c.expect(before.scores == after.scores, "scores differ after the save/load cycle");
}

// ---- criterion 9: the conditional AR benchmark -----------------------------

bool criterion_9(Checker& c) {
    const char* env = std::getenv("DBCSP_AR_DATASET");
    if (env == nullptr || !fs::exists(env)) return false;

    const LabeledDataset data = dbcsp::io::load_dataset(env);
    dbcsp::dist::DistanceSpec eucl;
    dbcsp::csp::FeatureSpec fspec;
    dbcsp::classify::CvConfig cfg;
    cfg.folds = 10;
    cfg.seed = 1;

    const dbcsp::classify::CvReport report =
        dbcsp::classify::cross_validate(data, 3, eucl, fspec, cfg);
    c.expect(report.mean_acc >= 0.86 && report.mean_acc <= 0.96,
             "q=3 accuracy " + std::to_string(report.mean_acc) + " outside [0.86, 0.96]");

    const dbcsp::classify::SelectQReport grid =
        dbcsp::classify::select_q(data, {1, 2, 3, 5, 10, 15}, eucl, fspec,
                                  dbcsp::classify::SelectQMode::Cv, 0.75, cfg);
    double best = 0.0;
    double at_q2 = -1.0;
    for (const auto& row : grid) {
        best = std::max(best, row.accuracy);
        if (row.q == 2) at_q2 = row.accuracy;
    }
    c.expect(at_q2 >= 0.0, "grid row for q=2 missing");
    c.expect(best - at_q2 <= 0.05,
             "q=2 accuracy " + std::to_string(at_q2) + " more than 0.05 below the best " +
                 std::to_string(best));
    return true;
}

// ---- criterion 10: CLI golden reports and SVG counts -----------------------

void criterion_10(Checker& c) {
    const std::string tool = DBCSP_TOOL;
    const fs::path golden_dir = DBCSP_GOLDEN_DIR;
    const fs::path dir = testutil::fresh_temp_dir("accept_cli");
    const auto arg = [](const fs::path& p) { return "\"" + p.string() + "\""; };

    const fs::path manifest = dir / "ds" / "manifest.json";
    const fs::path noisy_manifest = dir / "ds2" / "manifest.json";
    const fs::path model = dir / "model.json";
    testutil::CommandResult r =
        testutil::run_command(tool + " generate --out " + arg(dir / "ds") +
                              " --channels 6 --samples 80 --n1 12 --n2 12 --seed 5");
    c.expect(r.exit_code == 0, "generate failed: " + r.output);
    r = testutil::run_command(tool + " generate --out " + arg(dir / "ds2") +
                              " --channels 6 --samples 80 --n1 12 --n2 12 --variance-ratio 3"
                              " --noise-sd 1 --seed 5");
    c.expect(r.exit_code == 0, "generate failed: " + r.output);
    r = testutil::run_command(tool + " fit --dataset " + arg(manifest) + " --model " +
                              arg(model) + " --q 2 --folds 4 --seed 11");
    c.expect(r.exit_code == 0, "fit failed: " + r.output);
    if (!c.ok()) return;

    const fs::path info = dir / "info.json";
    r = testutil::run_command(tool + " info --dataset " + arg(manifest) + " --out " + arg(info));
    c.expect(r.exit_code == 0, "info failed");
    c.expect(testutil::slurp(info) == testutil::slurp(golden_dir / "info.json"),
             "info report differs from the golden file");

    const fs::path eval1 = dir / "eval1.json";
    const fs::path eval2 = dir / "eval2.json";
    const std::string eval_cmd = tool + " evaluate --dataset " + arg(noisy_manifest) +
                                 " --q 2 --folds 4 --seed 11 --out ";
    r = testutil::run_command(eval_cmd + arg(eval1));
    c.expect(r.exit_code == 0, "evaluate failed");
    testutil::run_command(eval_cmd + arg(eval2));
    c.expect(testutil::slurp(eval1) == testutil::slurp(eval2),
             "evaluate is not deterministic under --seed");
    c.expect(testutil::slurp(eval1) == testutil::slurp(golden_dir / "evaluate.json"),
             "evaluate report differs from the golden file");

    const fs::path selectq = dir / "selectq.json";
    r = testutil::run_command(tool + " select-q --dataset " + arg(noisy_manifest) +
                              " --q 1,2,3 --cv --folds 4 --seed 11 --out " + arg(selectq));
    c.expect(r.exit_code == 0, "select-q failed");
    c.expect(testutil::slurp(selectq) == testutil::slurp(golden_dir / "select_q.json"),
             "select-q report differs from the golden file");

    const fs::path plot = dir / "plot.svg";
    r = testutil::run_command(tool + " plot --dataset " + arg(manifest) + " --model " +
                              arg(model) + " --vectors 1:2 --out " + arg(plot));
    c.expect(r.exit_code == 0, "plot failed");
    const std::string plot_svg = testutil::slurp(plot);
    std::string xml_error;
    c.expect(oracle::xml_well_formed(plot_svg, &xml_error), "plot SVG: " + xml_error);
    c.expect(testutil::count_occurrences(plot_svg, "<polyline") == 10,
             "plot drew " +
                 std::to_string(testutil::count_occurrences(plot_svg, "<polyline")) +
                 " polylines, expected 6 channels + 4 projections");

    const fs::path box = dir / "box.svg";
    r = testutil::run_command(tool + " boxplot --dataset " + arg(manifest) + " --model " +
                              arg(model) + " --vectors 1:2 --out " + arg(box));
    c.expect(r.exit_code == 0, "boxplot failed");
    const std::string box_svg = testutil::slurp(box);
    c.expect(oracle::xml_well_formed(box_svg, &xml_error), "boxplot SVG: " + xml_error);
    c.expect(testutil::count_occurrences(box_svg, "class=\"box\"") == 8,
             "boxplot drew " +
                 std::to_string(testutil::count_occurrences(box_svg, "class=\"box\"")) +
                 " boxes, expected 4 columns x 2 classes");

    const fs::path plot_again = dir / "plot_again.svg";
    testutil::run_command(tool + " plot --dataset " + arg(manifest) + " --model " + arg(model) +
                          " --vectors 1:2 --out " + arg(plot_again));
    c.expect(testutil::slurp(plot_again) == plot_svg, "plot SVG is not deterministic");
}

} // namespace

int main() {
    struct Criterion {
        int id;
        std::string description;
        std::function<bool(Checker&)> run;  // returns false to SKIP
    };

    // Criteria 1 and 2 share the same 50-dataset sweep; run it once.
    auto shared_1 = std::make_shared<Checker>();
    auto shared_2 = std::make_shared<Checker>();
    auto swept = std::make_shared<bool>(false);
    const auto ensure_sweep = [=] {
        if (!*swept) {
            criterion_1_and_2(*shared_1, *shared_2);
            *swept = true;
        }
    };

    const std::vector<Criterion> criteria = {
        {1, "euclidean DB-CSP matches classical CSP on 50 random datasets",
         [=](Checker& c) {
             ensure_sweep();
             c = *shared_1;
             return true;
         }},
        {2, "fitted filters satisfy the identity constraint",
         [=](Checker& c) {
             ensure_sweep();
             c = *shared_2;
             return true;
         }},
        {3, "DTW equals brute-force path enumeration",
         [](Checker& c) {
             criterion_3(c);
             return true;
         }},
        {4, "positive-definite repair matches the eigenvalue-clipping oracle",
         [](Checker& c) {
             criterion_4(c);
             return true;
         }},
        {5, "synthetic end-to-end accuracy is high and collapses under permuted labels",
         [](Checker& c) {
             criterion_5(c);
             return true;
         }},
        {6, "features match the naive reimplementation within 1e-12",
         [](Checker& c) {
             criterion_6(c);
             return true;
         }},
        {7, "LDA reproduces closed-form boundaries and is translation invariant",
         [](Checker& c) {
             criterion_7(c);
             return true;
         }},
        {8, "dataset and model round-trips are lossless with bit-identical predictions",
         [](Checker& c) {
             criterion_8(c);
             return true;
         }},
        {9, "AR dataset benchmark (set DBCSP_AR_DATASET to enable)", criterion_9},
        {10, "CLI golden reports and SVG element counts are deterministic",
         [](Checker& c) {
             criterion_10(c);
             return true;
         }},
    };

    bool any_failed = false;
    for (const Criterion& criterion : criteria) {
        Checker checker;
        bool ran = true;
        const auto start = std::chrono::steady_clock::now();
        try {
            ran = criterion.run(checker);
        } catch (const std::exception& e) {
            checker.expect(false, std::string("exception: ") + e.what());
        }
        const double elapsed = seconds_since(start);
        if (!ran) {
            std::printf("SKIP: %d %s\n", criterion.id, criterion.description.c_str());
        } else if (checker.ok()) {
            std::printf("PASS: %d %s (%.2f s)\n", criterion.id, criterion.description.c_str(),
                        elapsed);
        } else {
            any_failed = true;
            std::printf("FAIL: %d %s — %s\n", criterion.id, criterion.description.c_str(),
                        checker.note().c_str());
        }
        std::fflush(stdout);
    }
    return any_failed ? 1 : 0;
}
