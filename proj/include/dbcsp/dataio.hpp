#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dbcsp/classify.hpp"
#include "dbcsp/csp.hpp"
#include "dbcsp/trial.hpp"

namespace dbcsp::io {

/// Dataset layout on disk: a JSON manifest naming two classes and one
/// numeric CSV per trial (channels x samples, no header), paths relative
/// to the manifest.
struct DatasetManifest {
    int format_version = 1;
    std::string label1;
    std::string label2;
    std::vector<std::string> class1_files;
    std::vector<std::string> class2_files;
    int channels = 0;
    int samples = 0;  // 0 = variable per trial
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// One trial from a numeric CSV. expected_channels / expected_samples of
/// 0 skip that check. Errors name the file and line.
Trial load_trial_csv(const std::filesystem::path& path, int expected_channels = 0,
                     int expected_samples = 0);

void save_trial_csv(const Trial& trial, const std::filesystem::path& path);

LabeledDataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes manifest.json plus trials/ CSVs under dir; returns the manifest
/// path.
std::filesystem::path save_dataset(const LabeledDataset& data,
                                   const std::filesystem::path& dir);

/// Model persistence as a versioned JSON document. Loading validates
/// every structural invariant and rejects unknown versions.
void save_model(const classify::CspPipelineModel& model, const std::filesystem::path& path);
classify::CspPipelineModel load_model(const std::filesystem::path& path);

/// CSV feature table: one column per (statistic, filter column) pair
/// named <kind>_<a|b><j>, a trailing label column, class-1 rows first.
void export_features(const LabeledDataset& data, const csp::CspFilters& filters,
                     const csp::FeatureSpec& fspec, const std::filesystem::path& path);

/// Two-class dataset with a known variance contrast: latent source 1 has
/// variance `variance_ratio` in class 1 and 1 in class 2, source 2 the
/// reverse, remaining sources unit variance; sources are mixed by a
/// seeded random orthogonal matrix and optionally perturbed by Gaussian
/// noise. Deterministic for fixed seeds.
struct SyntheticSpec {
    int channels = 6;
    int samples = 200;
    int n1 = 30;
    int n2 = 30;
    double variance_ratio = 10.0;
    std::uint64_t mixing_seed = 1;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

LabeledDataset generate_synthetic(const SyntheticSpec& spec);

} // namespace dbcsp::io
