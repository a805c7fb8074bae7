#include "dbcsp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dbcsp/rng.hpp"

namespace dbcsp::classify {

namespace {

std::mt19937_64 make_engine(const std::optional<std::uint64_t>& seed) {
    if (seed) return std::mt19937_64(*seed);
    std::random_device device;
    const std::uint64_t entropy =
        (static_cast<std::uint64_t>(device()) << 32) ^ static_cast<std::uint64_t>(device());
    return std::mt19937_64(entropy);
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += (v - mean) * (v - mean);
    return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

struct IndexedTrials {
    std::vector<Trial> trials;
    std::vector<int> class_index;
};

IndexedTrials gather(const LabeledDataset& data, const std::vector<int>& membership, int fold,
                     bool take_fold) {
    IndexedTrials out;
    const int n1 = static_cast<int>(data.class1().size());
    for (int i = 0; i < n1; ++i) {
        if ((membership[static_cast<std::size_t>(i)] == fold) == take_fold) {
            out.trials.push_back(data.class1()[static_cast<std::size_t>(i)]);
            out.class_index.push_back(0);
        }
    }
    const int n2 = static_cast<int>(data.class2().size());
    for (int j = 0; j < n2; ++j) {
        if ((membership[static_cast<std::size_t>(n1 + j)] == fold) == take_fold) {
            out.trials.push_back(data.class2()[static_cast<std::size_t>(j)]);
            out.class_index.push_back(1);
        }
    }
    return out;
}

double subset_accuracy(const csp::CspFilters& filters, const LdaModel& lda,
                       const csp::FeatureSpec& fspec, const IndexedTrials& subset) {
    const Eigen::MatrixXd features = feature_matrix(subset.trials, filters, fspec);
    const LdaPrediction prediction = lda_predict(lda, features);
    int correct = 0;
    for (std::size_t i = 0; i < subset.class_index.size(); ++i) {
        if (prediction.class_index[i] == subset.class_index[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(subset.class_index.size());
}

} // namespace

void CvConfig::validate() const {
    if (folds < 2) {
        throw ConfigError("cross validation needs at least 2 folds, got " +
                          std::to_string(folds));
    }
}

std::vector<int> stratified_folds(int n1, int n2, const CvConfig& cfg) {
    cfg.validate();
    if (cfg.folds > std::min(n1, n2)) {
        throw ConfigError("folds=" + std::to_string(cfg.folds) +
                          " exceeds the smaller class size " + std::to_string(std::min(n1, n2)));
    }
    std::mt19937_64 engine = make_engine(cfg.seed);
    std::vector<int> membership(static_cast<std::size_t>(n1 + n2));
    int offset = 0;
    for (int count : {n1, n2}) {
        const std::vector<std::size_t> perm =
            util::random_permutation(static_cast<std::size_t>(count), engine);
        for (int pos = 0; pos < count; ++pos) {
            membership[static_cast<std::size_t>(offset) + perm[static_cast<std::size_t>(pos)]] =
                pos % cfg.folds;
        }
        offset += count;
    }
    return membership;
}

LabeledDataset fold_training_dataset(const LabeledDataset& data,
                                     const std::vector<int>& membership, int fold) {
    if (membership.size() != data.size()) {
        throw ArgumentError("fold membership length does not match the dataset");
    }
    IndexedTrials train = gather(data, membership, fold, false);
    std::vector<Trial> class1;
    std::vector<Trial> class2;
    for (std::size_t i = 0; i < train.trials.size(); ++i) {
        (train.class_index[i] == 0 ? class1 : class2).push_back(std::move(train.trials[i]));
    }
    return LabeledDataset(data.label1(), data.label2(), std::move(class1), std::move(class2));
}

Eigen::MatrixXd feature_matrix(const std::vector<Trial>& trials, const csp::CspFilters& filters,
                               const csp::FeatureSpec& fspec) {
    fspec.validate();
    const Eigen::Index p =
        static_cast<Eigen::Index>(fspec.kinds.size()) * 2 * static_cast<Eigen::Index>(filters.q);
    Eigen::MatrixXd features(static_cast<Eigen::Index>(trials.size()), p);
    for (std::size_t i = 0; i < trials.size(); ++i) {
        features.row(static_cast<Eigen::Index>(i)) =
            csp::extract_features(csp::project(csp::standardize_trial(trials[i]), filters), fspec)
                .transpose();
    }
    return features;
}

CvReport cross_validate(const LabeledDataset& data, int q, const dist::DistanceSpec& spec,
                        const csp::FeatureSpec& fspec, const CvConfig& cfg, double eig_tol) {
    const int n1 = static_cast<int>(data.class1().size());
    const int n2 = static_cast<int>(data.class2().size());
    CvReport report;
    report.fold_membership = stratified_folds(n1, n2, cfg);
    report.fold_accuracies.resize(static_cast<std::size_t>(cfg.folds));

    for (int fold = 0; fold < cfg.folds; ++fold) {
        const LabeledDataset train = fold_training_dataset(data, report.fold_membership, fold);
        const csp::CspFilters filters = csp::compute_filters(train, q, spec, eig_tol);

        IndexedTrials train_set;
        train_set.trials = train.class1();
        train_set.trials.insert(train_set.trials.end(), train.class2().begin(),
                                train.class2().end());
        train_set.class_index.assign(train.class1().size(), 0);
        train_set.class_index.insert(train_set.class_index.end(), train.class2().size(), 1);

        const Eigen::MatrixXd train_features = feature_matrix(train_set.trials, filters, fspec);
        const LdaModel lda =
            lda_fit(train_features, train_set.class_index, data.label1(), data.label2());

        const IndexedTrials test = gather(data, report.fold_membership, fold, true);
        report.fold_accuracies[static_cast<std::size_t>(fold)] =
            subset_accuracy(filters, lda, fspec, test);
    }

    report.mean_acc = mean_of(report.fold_accuracies);
    report.sd_acc = sample_sd(report.fold_accuracies, report.mean_acc);
    return report;
}

SelectQReport select_q(const LabeledDataset& data, const std::vector<int>& q_grid,
                       const dist::DistanceSpec& spec, const csp::FeatureSpec& fspec,
                       SelectQMode mode, double train_size, const CvConfig& cfg,
                       double eig_tol) {
    if (q_grid.empty()) {
        throw ConfigError("dimension grid must not be empty");
    }
    std::vector<int> grid = q_grid;
    std::sort(grid.begin(), grid.end());
    if (std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw ConfigError("dimension grid contains duplicate values");
    }
    for (int q : grid) {
        if (q < 1 || 2 * static_cast<Eigen::Index>(q) > data.channels()) {
            throw ConfigError("grid value q=" + std::to_string(q) +
                              " violates 1 <= 2q <= channels (" +
                              std::to_string(data.channels()) + ")");
        }
    }

    SelectQReport report;
    if (mode == SelectQMode::Holdout) {
        if (!(train_size > 0.0 && train_size < 1.0)) {
            throw ConfigError("train_size must lie strictly between 0 and 1, got " +
                              std::to_string(train_size));
        }
        // One stratified split shared by every grid value.
        std::mt19937_64 engine = make_engine(cfg.seed);
        std::vector<int> membership;
        for (const auto* cls : {&data.class1(), &data.class2()}) {
            const int n = static_cast<int>(cls->size());
            int n_train =
                static_cast<int>(std::lround(train_size * static_cast<double>(n)));
            n_train = std::clamp(n_train, 1, n - 1);
            const std::vector<std::size_t> perm =
                util::random_permutation(static_cast<std::size_t>(n), engine);
            std::vector<int> cls_membership(static_cast<std::size_t>(n));
            for (int pos = 0; pos < n; ++pos) {
                cls_membership[perm[static_cast<std::size_t>(pos)]] = pos < n_train ? 1 : 0;
            }
            membership.insert(membership.end(), cls_membership.begin(), cls_membership.end());
        }
        // Fold 0 is the held-out set.
        const LabeledDataset train = fold_training_dataset(data, membership, 0);
        const csp::CspDecomposition decomposition = csp::decompose(train, spec, eig_tol);
        const IndexedTrials test = gather(data, membership, 0, true);

        IndexedTrials train_set;
        train_set.trials = train.class1();
        train_set.trials.insert(train_set.trials.end(), train.class2().begin(),
                                train.class2().end());
        train_set.class_index.assign(train.class1().size(), 0);
        train_set.class_index.insert(train_set.class_index.end(), train.class2().size(), 1);

        for (int q : grid) {
            const csp::CspFilters filters =
                csp::filters_from_decomposition(decomposition.pairs, q, spec);
            const Eigen::MatrixXd train_features =
                feature_matrix(train_set.trials, filters, fspec);
            const LdaModel lda =
                lda_fit(train_features, train_set.class_index, data.label1(), data.label2());
            report.push_back({q, subset_accuracy(filters, lda, fspec, test), std::nullopt});
        }
        return report;
    }

    // Cross-validation mode: one partition, one decomposition per fold,
    // sliced for each grid value.
    const int n1 = static_cast<int>(data.class1().size());
    const int n2 = static_cast<int>(data.class2().size());
    const std::vector<int> membership = stratified_folds(n1, n2, cfg);
    std::vector<std::vector<double>> accuracies(grid.size());

    for (int fold = 0; fold < cfg.folds; ++fold) {
        const LabeledDataset train = fold_training_dataset(data, membership, fold);
        const csp::CspDecomposition decomposition = csp::decompose(train, spec, eig_tol);
        const IndexedTrials test = gather(data, membership, fold, true);

        IndexedTrials train_set;
        train_set.trials = train.class1();
        train_set.trials.insert(train_set.trials.end(), train.class2().begin(),
                                train.class2().end());
        train_set.class_index.assign(train.class1().size(), 0);
        train_set.class_index.insert(train_set.class_index.end(), train.class2().size(), 1);

        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            const csp::CspFilters filters =
                csp::filters_from_decomposition(decomposition.pairs, grid[gi], spec);
            const Eigen::MatrixXd train_features =
                feature_matrix(train_set.trials, filters, fspec);
            const LdaModel lda =
                lda_fit(train_features, train_set.class_index, data.label1(), data.label2());
            accuracies[gi].push_back(subset_accuracy(filters, lda, fspec, test));
        }
    }

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double mean = mean_of(accuracies[gi]);
        report.push_back({grid[gi], mean, sample_sd(accuracies[gi], mean)});
    }
    return report;
}

CspPipelineModel train_pipeline(const LabeledDataset& data, int q, int selected_q,
                                const dist::DistanceSpec& spec, const csp::FeatureSpec& fspec,
                                const CvConfig& cfg, double eig_tol) {
    if (selected_q < 1 || selected_q > q) {
        throw ConfigError("selected_q must lie in [1, q], got " + std::to_string(selected_q) +
                          " with q=" + std::to_string(q));
    }
    CspPipelineModel model;
    model.filters = csp::compute_filters(data, q, spec, eig_tol);
    model.selected_q = selected_q;
    model.features = fspec;

    const csp::CspFilters effective = model.effective_filters();
    std::vector<Trial> all_trials = data.class1();
    all_trials.insert(all_trials.end(), data.class2().begin(), data.class2().end());
    std::vector<int> class_index(data.class1().size(), 0);
    class_index.insert(class_index.end(), data.class2().size(), 1);

    const Eigen::MatrixXd features = feature_matrix(all_trials, effective, fspec);
    model.lda = lda_fit(features, class_index, data.label1(), data.label2());
    model.cv = cross_validate(data, selected_q, spec, fspec, cfg, eig_tol);
    return model;
}

PredictionResult predict_pipeline(const CspPipelineModel& model, const std::vector<Trial>& trials,
                                  const std::optional<std::vector<std::string>>& true_targets) {
    if (true_targets && true_targets->size() != trials.size()) {
        throw ArgumentError("true targets list a different number of trials");
    }
    if (true_targets) {
        for (const std::string& label : *true_targets) {
            if (label != model.lda.label1 && label != model.lda.label2) {
                throw ArgumentError("label mismatch: \"" + label +
                                    "\" is not one of the model labels \"" + model.lda.label1 +
                                    "\", \"" + model.lda.label2 + "\"");
            }
        }
    }

    PredictionResult result;
    result.scores.resize(0, 2);
    if (trials.empty()) {
        if (true_targets) result.accuracy.reset();
        return result;
    }

    const csp::CspFilters effective = model.effective_filters();
    const Eigen::MatrixXd features = feature_matrix(trials, effective, model.features);
    LdaPrediction prediction = lda_predict(model.lda, features);
    result.labels = std::move(prediction.labels);
    result.scores = std::move(prediction.scores);
    if (true_targets) {
        int correct = 0;
        for (std::size_t i = 0; i < trials.size(); ++i) {
            if (result.labels[i] == (*true_targets)[i]) ++correct;
        }
        result.accuracy = static_cast<double>(correct) / static_cast<double>(trials.size());
    }
    return result;
}

} // namespace dbcsp::classify
