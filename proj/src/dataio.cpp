#include "dbcsp/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "dbcsp/parallel.hpp"
#include "dbcsp/rng.hpp"

using nlohmann::json;

namespace dbcsp::io {

namespace {

constexpr int kDatasetFormatVersion = 1;
constexpr int kModelFormatVersion = 1;

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(std::string(what) + " not readable: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << content;
    if (!out) {
        throw DataError("write failed: " + path.string());
    }
}

double parse_cell(std::string_view cell, const std::filesystem::path& file, std::size_t line) {
    // Trim blanks around the token; RFC 4180 files have none but hand
    // edited ones often do.
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
    std::string_view digits = cell;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
        throw DataError(file.string() + ":" + std::to_string(line) + ": not a number: \"" +
                        std::string(cell) + "\"");
    }
    if (!std::isfinite(value)) {
        throw DataError(file.string() + ":" + std::to_string(line) + ": non-finite value");
    }
    return value;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw DataError("matrix dimensions disagree with data length");
    }
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data.at(at++).get<double>();
    }
    return m;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
    return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

DatasetManifest manifest_from_json(const json& j, const std::filesystem::path& path) {
    DatasetManifest m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kDatasetFormatVersion) {
        throw DataError("unsupported dataset format version " +
                        std::to_string(m.format_version) + " in " + path.string());
    }
    const auto& labels = j.at("labels");
    if (!labels.is_array() || labels.size() != 2) {
        throw DataError(path.string() + ": labels must be an array of two strings");
    }
    m.label1 = labels.at(0).get<std::string>();
    m.label2 = labels.at(1).get<std::string>();
    m.class1_files = j.at("class1_files").get<std::vector<std::string>>();
    m.class2_files = j.at("class2_files").get<std::vector<std::string>>();
    m.channels = j.at("channels").get<int>();
    m.samples = j.at("samples").get<int>();
    if (m.class1_files.size() < 2 || m.class2_files.size() < 2) {
        throw DataError(path.string() + ": each class needs at least 2 trial files");
    }
    return m;
}

} // namespace

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) {
        throw ArgumentError("double formatting failed");
    }
    return std::string(buffer, ptr);
}

Trial load_trial_csv(const std::filesystem::path& path, int expected_channels,
                     int expected_samples) {
    const std::string content = read_file(path, "trial file");
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    // Skip a UTF-8 byte-order mark if present.
    if (content.rfind("\xEF\xBB\xBF", 0) == 0) start = 3;
    while (start <= content.size()) {
        if (start == content.size()) break;
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string_view line(content.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        start = end + 1;
        if (line.empty()) continue;

        std::vector<double> row;
        std::size_t cell_start = 0;
        while (true) {
            const std::size_t comma = line.find(',', cell_start);
            const std::string_view cell = line.substr(
                cell_start, comma == std::string_view::npos ? std::string_view::npos
                                                            : comma - cell_start);
            row.push_back(parse_cell(cell, path, line_no));
            if (comma == std::string_view::npos) break;
            cell_start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": ragged row, got " +
                            std::to_string(row.size()) + " cells, expected " +
                            std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw DataError(path.string() + ": empty trial file");
    }
    if (rows.size() < 2) {
        throw DataError(path.string() + ": a trial needs at least 2 signal rows, got " +
                        std::to_string(rows.size()));
    }
    if (expected_channels > 0 && rows.size() != static_cast<std::size_t>(expected_channels)) {
        throw DataError(path.string() + ": expected " + std::to_string(expected_channels) +
                        " channels, got " + std::to_string(rows.size()));
    }
    if (expected_samples > 0 && rows.front().size() != static_cast<std::size_t>(expected_samples)) {
        throw DataError(path.string() + ": expected " + std::to_string(expected_samples) +
                        " samples, got " + std::to_string(rows.front().size()));
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            data(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return Trial(std::move(data));
}

void save_trial_csv(const Trial& trial, const std::filesystem::path& path) {
    std::string out;
    for (Eigen::Index i = 0; i < trial.channels(); ++i) {
        for (Eigen::Index j = 0; j < trial.samples(); ++j) {
            if (j > 0) out += ',';
            out += format_double(trial.data()(i, j));
        }
        out += '\n';
    }
    write_file(path, out);
}

LabeledDataset load_dataset(const std::filesystem::path& manifest_path) {
    json j;
    try {
        j = json::parse(read_file(manifest_path, "dataset manifest"));
    } catch (const json::exception& e) {
        throw DataError("dataset manifest " + manifest_path.string() +
                        " is not valid JSON: " + e.what());
    }
    DatasetManifest manifest;
    try {
        manifest = manifest_from_json(j, manifest_path);
    } catch (const json::exception& e) {
        throw DataError("dataset manifest " + manifest_path.string() + " is malformed: " +
                        e.what());
    }

    const std::filesystem::path base = manifest_path.parent_path();
    auto load_class = [&](const std::vector<std::string>& files) {
        std::vector<std::optional<Trial>> slots(files.size());
        util::parallel_for(files.size(), [&](std::size_t i) {
            slots[i] = load_trial_csv(base / files[i], manifest.channels, manifest.samples);
        });
        std::vector<Trial> trials;
        trials.reserve(files.size());
        for (auto& slot : slots) trials.push_back(std::move(*slot));
        return trials;
    };
    return LabeledDataset(manifest.label1, manifest.label2, load_class(manifest.class1_files),
                          load_class(manifest.class2_files));
}

std::filesystem::path save_dataset(const LabeledDataset& data,
                                   const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "trials");

    int samples = static_cast<int>(data.class1().front().samples());
    for (const auto* cls : {&data.class1(), &data.class2()}) {
        for (const Trial& t : *cls) {
            if (t.samples() != samples) samples = 0;
        }
    }

    DatasetManifest manifest;
    manifest.label1 = data.label1();
    manifest.label2 = data.label2();
    manifest.channels = static_cast<int>(data.channels());
    manifest.samples = samples;

    char name[64];
    for (std::size_t i = 0; i < data.class1().size(); ++i) {
        std::snprintf(name, sizeof(name), "trials/class1_%03zu.csv", i);
        save_trial_csv(data.class1()[i], dir / name);
        manifest.class1_files.emplace_back(name);
    }
    for (std::size_t i = 0; i < data.class2().size(); ++i) {
        std::snprintf(name, sizeof(name), "trials/class2_%03zu.csv", i);
        save_trial_csv(data.class2()[i], dir / name);
        manifest.class2_files.emplace_back(name);
    }

    const json j{{"format_version", kDatasetFormatVersion},
                 {"labels", {manifest.label1, manifest.label2}},
                 {"channels", manifest.channels},
                 {"samples", manifest.samples},
                 {"class1_files", manifest.class1_files},
                 {"class2_files", manifest.class2_files}};
    const std::filesystem::path manifest_path = dir / "manifest.json";
    write_file(manifest_path, j.dump(2) + "\n");
    return manifest_path;
}

void save_model(const classify::CspPipelineModel& model, const std::filesystem::path& path) {
    if (!model.filters.W.allFinite() || !model.filters.eigenvalues.allFinite() ||
        !model.lda.mean1.allFinite() || !model.lda.mean2.allFinite() ||
        !model.lda.pooled_cov.mat().allFinite()) {
        throw ArgumentError("model contains non-finite values");
    }
    json j{
        {"format_version", kModelFormatVersion},
        {"labels", {model.lda.label1, model.lda.label2}},
        {"q", model.filters.q},
        {"selected_q", model.selected_q},
        {"channels", model.filters.channels()},
        {"distance",
         {{"kind", dist::canonical_kind(model.filters.distance.kind)},
          {"mixture", model.filters.distance.mixture},
          {"w", model.filters.distance.w}}},
        {"features", json::array()},
        {"filters", matrix_to_json(model.filters.W)},
        {"eigenvalues", vector_to_json(model.filters.eigenvalues)},
        {"lda",
         {{"means", {vector_to_json(model.lda.mean1), vector_to_json(model.lda.mean2)}},
          {"pooled_cov", matrix_to_json(model.lda.pooled_cov.mat())},
          {"priors", {model.lda.prior1, model.lda.prior2}},
          {"ridge", model.lda.ridge}}},
    };
    for (csp::FeatureKind kind : model.features.kinds) {
        j["features"].push_back(csp::to_string(kind));
    }
    if (model.cv) {
        j["cv"] = {{"folds", model.cv->fold_accuracies.size()},
                   {"fold_accuracies", model.cv->fold_accuracies},
                   {"mean_acc", model.cv->mean_acc},
                   {"sd_acc", model.cv->sd_acc},
                   {"fold_membership", model.cv->fold_membership}};
    }
    write_file(path, j.dump(2) + "\n");
}

classify::CspPipelineModel load_model(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path, "model file"));
    } catch (const json::exception& e) {
        throw DataError("corrupt model file " + path.string() + ": " + e.what());
    }

    if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
        throw DataError("corrupt model file " + path.string() + ": missing format_version");
    }
    if (j["format_version"].get<int>() != kModelFormatVersion) {
        throw DataError("unsupported model format version " +
                        j["format_version"].dump() + " in " + path.string() +
                        " (supported: " + std::to_string(kModelFormatVersion) + ")");
    }

    try {
        classify::CspPipelineModel model;
        model.filters.q = j.at("q").get<int>();
        model.selected_q = j.at("selected_q").get<int>();
        model.filters.W = matrix_from_json(j.at("filters"));
        model.filters.eigenvalues = vector_from_json(j.at("eigenvalues"));
        model.filters.distance.kind = j.at("distance").at("kind").get<std::string>();
        model.filters.distance.mixture = j.at("distance").at("mixture").get<bool>();
        model.filters.distance.w = j.at("distance").at("w").get<double>();

        model.features.kinds.clear();
        for (const auto& name : j.at("features")) {
            model.features.kinds.push_back(
                csp::feature_kind_from_string(name.get<std::string>()));
        }

        const auto& lda = j.at("lda");
        model.lda.mean1 = vector_from_json(lda.at("means").at(0));
        model.lda.mean2 = vector_from_json(lda.at("means").at(1));
        model.lda.pooled_cov = linalg::SymMatrix(matrix_from_json(lda.at("pooled_cov")));
        model.lda.prior1 = lda.at("priors").at(0).get<double>();
        model.lda.prior2 = lda.at("priors").at(1).get<double>();
        model.lda.ridge = lda.at("ridge").get<double>();
        model.lda.label1 = j.at("labels").at(0).get<std::string>();
        model.lda.label2 = j.at("labels").at(1).get<std::string>();

        if (j.contains("cv")) {
            classify::CvReport report;
            report.fold_accuracies = j["cv"].at("fold_accuracies").get<std::vector<double>>();
            report.mean_acc = j["cv"].at("mean_acc").get<double>();
            report.sd_acc = j["cv"].at("sd_acc").get<double>();
            report.fold_membership = j["cv"].at("fold_membership").get<std::vector<int>>();
            model.cv = std::move(report);
        }

        // Invariant checks on the assembled model.
        const auto channels = j.at("channels").get<Eigen::Index>();
        const int q = model.filters.q;
        if (q < 1 || model.selected_q < 1 || model.selected_q > q) {
            throw DataError("selected_q/q out of range");
        }
        if (model.filters.W.rows() != channels || model.filters.W.cols() != 2 * q ||
            2 * static_cast<Eigen::Index>(q) > channels) {
            throw DataError("filter matrix dimensions are inconsistent");
        }
        if (model.filters.eigenvalues.size() != 2 * q) {
            throw DataError("eigenvalue count does not match 2q");
        }
        if (!model.filters.W.allFinite() || !model.filters.eigenvalues.allFinite()) {
            throw DataError("filters contain non-finite values");
        }
        model.filters.distance.validate();
        model.features.validate();
        const Eigen::Index p = static_cast<Eigen::Index>(model.features.kinds.size()) * 2 *
                               static_cast<Eigen::Index>(model.selected_q);
        if (model.lda.mean1.size() != p || model.lda.mean2.size() != p ||
            model.lda.pooled_cov.dim() != p) {
            throw DataError("LDA dimensions do not match 2 * selected_q * |features|");
        }
        if (!model.lda.mean1.allFinite() || !model.lda.mean2.allFinite() ||
            !model.lda.pooled_cov.mat().allFinite() || !(model.lda.ridge >= 0.0)) {
            throw DataError("LDA parameters contain invalid values");
        }
        if (!(model.lda.prior1 > 0.0 && model.lda.prior1 < 1.0) ||
            !(model.lda.prior2 > 0.0 && model.lda.prior2 < 1.0) ||
            std::abs(model.lda.prior1 + model.lda.prior2 - 1.0) > 1e-9) {
            throw DataError("priors must lie in (0,1) and sum to 1");
        }
        if (model.lda.label1.empty() || model.lda.label2.empty() ||
            model.lda.label1 == model.lda.label2) {
            throw DataError("labels must be distinct and non-empty");
        }
        return model;
    } catch (const json::exception& e) {
        throw DataError("corrupt model file " + path.string() + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError("corrupt model file " + path.string() + ": " + e.what());
    } catch (const Error& e) {
        throw DataError("corrupt model file " + path.string() + ": " + e.what());
    }
}

void export_features(const LabeledDataset& data, const csp::CspFilters& filters,
                     const csp::FeatureSpec& fspec, const std::filesystem::path& path) {
    fspec.validate();
    const int q = filters.q;
    std::string out;
    for (csp::FeatureKind kind : fspec.kinds) {
        for (int j = 1; j <= 2 * q; ++j) {
            out += csp::to_string(kind);
            out += '_';
            out += (j <= q) ? "a" + std::to_string(j) : "b" + std::to_string(j - q);
            out += ',';
        }
    }
    out += "label\n";

    auto append_rows = [&](const std::vector<Trial>& trials, const std::string& label) {
        for (const Trial& t : trials) {
            const Eigen::VectorXd features =
                csp::extract_features(csp::project(csp::standardize_trial(t), filters), fspec);
            for (Eigen::Index i = 0; i < features.size(); ++i) {
                out += format_double(features(i));
                out += ',';
            }
            out += label;
            out += '\n';
        }
    };
    append_rows(data.class1(), data.label1());
    append_rows(data.class2(), data.label2());
    write_file(path, out);
}

void SyntheticSpec::validate() const {
    if (channels < 2) throw ConfigError("synthetic data needs at least 2 channels");
    if (samples < 2) throw ConfigError("synthetic data needs at least 2 samples per trial");
    if (n1 < 2 || n2 < 2) throw ConfigError("synthetic data needs at least 2 trials per class");
    if (!(variance_ratio > 1.0)) {
        throw ConfigError("variance_ratio must exceed 1 to separate the classes, got " +
                          std::to_string(variance_ratio));
    }
    if (!(noise_sd >= 0.0)) throw ConfigError("noise_sd must be non-negative");
}

LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const int c = spec.channels;

    // Random orthogonal mixing matrix: QR of a Gaussian matrix with the
    // sign ambiguity fixed through R's diagonal.
    std::mt19937_64 mix_engine(spec.mixing_seed);
    util::NormalSampler mix_normal(mix_engine);
    Eigen::MatrixXd gaussian(c, c);
    for (Eigen::Index i = 0; i < c; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) gaussian(i, j) = mix_normal();
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
    Eigen::MatrixXd mixing = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < c; ++j) {
        if (r(j, j) < 0) mixing.col(j) = -mixing.col(j);
    }

    std::mt19937_64 engine(spec.seed);
    util::NormalSampler normal(engine);
    auto make_class = [&](int count, bool first_class) {
        std::vector<Trial> trials;
        trials.reserve(static_cast<std::size_t>(count));
        Eigen::VectorXd source_sd = Eigen::VectorXd::Ones(c);
        source_sd(first_class ? 0 : 1) = std::sqrt(spec.variance_ratio);
        for (int t = 0; t < count; ++t) {
            Eigen::MatrixXd sources(c, spec.samples);
            for (Eigen::Index i = 0; i < c; ++i) {
                for (Eigen::Index s = 0; s < spec.samples; ++s) {
                    sources(i, s) = source_sd(i) * normal();
                }
            }
            Eigen::MatrixXd mixed = mixing * sources;
            if (spec.noise_sd > 0.0) {
                for (Eigen::Index i = 0; i < c; ++i) {
                    for (Eigen::Index s = 0; s < spec.samples; ++s) {
                        mixed(i, s) += spec.noise_sd * normal();
                    }
                }
            }
            trials.emplace_back(std::move(mixed));
        }
        return trials;
    };

    std::vector<Trial> class1 = make_class(spec.n1, true);
    std::vector<Trial> class2 = make_class(spec.n2, false);
    return LabeledDataset("C1", "C2", std::move(class1), std::move(class2));
}

} // namespace dbcsp::io
