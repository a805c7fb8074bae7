#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dbcsp/csp.hpp"
#include "dbcsp/lda.hpp"
#include "dbcsp/trial.hpp"

namespace dbcsp::classify {

/// Cross-validation settings. Without a seed each run draws a fresh
/// partition; the fold membership is reported either way.
struct CvConfig {
    int folds = 10;
    std::optional<std::uint64_t> seed;

    void validate() const;
};

/// Per-fold accuracies plus the partition that produced them. The
/// membership vector lists class-1 trials first, then class-2.
struct CvReport {
    std::vector<double> fold_accuracies;
    double mean_acc = 0.0;
    double sd_acc = 0.0;
    std::vector<int> fold_membership;
};

struct SelectQRow {
    int q = 0;
    double accuracy = 0.0;
    std::optional<double> sd;
};

using SelectQReport = std::vector<SelectQRow>;

enum class SelectQMode { Holdout, Cv };

/// A fitted end-to-end classifier: spatial filters of dimension q, the
/// selected_q <= q pairs actually used for features, and the LDA on top.
/// cv carries the cross-validated accuracy from training when available.
struct CspPipelineModel {
    csp::CspFilters filters;
    int selected_q = 0;
    csp::FeatureSpec features;
    LdaModel lda;
    std::optional<CvReport> cv;

    csp::CspFilters effective_filters() const { return filters.head_pairs(selected_q); }
};

struct PredictionResult {
    std::vector<std::string> labels;
    Eigen::MatrixXd scores;
    std::optional<double> accuracy;
};

/// Deals a seeded per-class permutation round-robin into folds, so fold
/// sizes differ by at most one within each class. Requires
/// 2 <= folds <= min(n1, n2).
std::vector<int> stratified_folds(int n1, int n2, const CvConfig& cfg);

/// Training subset for one fold: every trial whose membership differs
/// from `fold`.
LabeledDataset fold_training_dataset(const LabeledDataset& data,
                                     const std::vector<int>& membership, int fold);

/// Feature rows for a list of raw trials: standardize, project, extract.
Eigen::MatrixXd feature_matrix(const std::vector<Trial>& trials, const csp::CspFilters& filters,
                               const csp::FeatureSpec& fspec);

/// Stratified k-fold estimate of the pipeline accuracy at dimension q.
/// Filters and the LDA are fitted per fold on the training trials only.
CvReport cross_validate(const LabeledDataset& data, int q, const dist::DistanceSpec& spec,
                        const csp::FeatureSpec& fspec, const CvConfig& cfg,
                        double eig_tol = linalg::kDefaultEigTol);

/// Accuracy per candidate dimension, sharing one partition (holdout
/// split or fold assignment) across the whole grid. Grid values must be
/// unique and satisfy 2q <= channels.
SelectQReport select_q(const LabeledDataset& data, const std::vector<int>& q_grid,
                       const dist::DistanceSpec& spec, const csp::FeatureSpec& fspec,
                       SelectQMode mode, double train_size, const CvConfig& cfg,
                       double eig_tol = linalg::kDefaultEigTol);

/// Fits filters of dimension q on all data, an LDA on the first/last
/// selected_q filter pairs, and attaches the cross-validated accuracy at
/// dimension selected_q.
CspPipelineModel train_pipeline(const LabeledDataset& data, int q, int selected_q,
                                const dist::DistanceSpec& spec, const csp::FeatureSpec& fspec,
                                const CvConfig& cfg, double eig_tol = linalg::kDefaultEigTol);

/// Classifies new trials; when true_targets are given they must come from
/// the model's label set and the match rate is reported.
PredictionResult predict_pipeline(const CspPipelineModel& model, const std::vector<Trial>& trials,
                                  const std::optional<std::vector<std::string>>& true_targets = {});

} // namespace dbcsp::classify
