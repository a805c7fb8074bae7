#include "dbcsp/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dbcsp/classify.hpp"
#include "dbcsp/dataio.hpp"
#include "dbcsp/errors.hpp"
#include "dbcsp/svg.hpp"

using nlohmann::json;

namespace dbcsp::cli {
namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);
const char* kClassFills[] = {"#9ecae1", "#fdae6b"};

std::string acc_str(double v) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.7g", v);
    return buffer;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::size_t end = comma == std::string::npos ? csv.size() : comma;
        items.push_back(csv.substr(start, end - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

int parse_int(const std::string& token, const std::string& what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
        throw ConfigError(what + ": \"" + token + "\" is not an integer");
    }
    return value;
}

std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> grid;
    for (const std::string& token : split_list(text)) {
        grid.push_back(parse_int(token, "--q grid entry"));
    }
    return grid;
}

/// --vectors accepts single indices, comma lists and a:b ranges
/// (inclusive, either direction), e.g. "1", "1:3", "1,4".
std::vector<int> parse_selectors(const std::string& text) {
    std::vector<int> selectors;
    for (const std::string& token : split_list(text)) {
        const std::size_t colon = token.find(':');
        if (colon == std::string::npos) {
            selectors.push_back(parse_int(token, "--vectors entry"));
            continue;
        }
        const int a = parse_int(token.substr(0, colon), "--vectors range start");
        const int b = parse_int(token.substr(colon + 1), "--vectors range end");
        const int step = a <= b ? 1 : -1;
        for (int v = a;; v += step) {
            selectors.push_back(v);
            if (v == b) break;
        }
    }
    if (selectors.empty()) {
        throw ConfigError("--vectors selects nothing");
    }
    return selectors;
}

/// Resolves selectors to filter column indices (1..2q, ascending). With
/// pairs on, a selector v brings in both members of its pair: a_v and
/// b_v when v <= q, a_{v-q} and b_{v-q} otherwise.
std::vector<int> expand_vectors(const std::vector<int>& selectors, int q, bool pairs) {
    std::set<int> columns;
    for (int v : selectors) {
        if (v < 1 || v > 2 * q) {
            throw ConfigError("--vectors value " + std::to_string(v) +
                              " is out of range; valid selectors are 1.." + std::to_string(2 * q) +
                              " (q=" + std::to_string(q) + ")");
        }
        if (pairs) {
            const int base = v <= q ? v : v - q;
            columns.insert(base);
            columns.insert(q + base);
        } else {
            columns.insert(v);
        }
    }
    return {columns.begin(), columns.end()};
}

std::string column_name(int column, int q) {
    return column <= q ? "a" + std::to_string(column) : "b" + std::to_string(column - q);
}

void check_q(int q, Eigen::Index channels) {
    if (q < 1 || 2 * static_cast<Eigen::Index>(q) > channels) {
        throw ConfigError("q must satisfy 1 <= 2q <= channels; got q=" + std::to_string(q) +
                          " with " + std::to_string(channels) + " channels");
    }
}

void write_report(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write report: " + path);
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw DataError("write failed: " + path);
    }
}

// ---- shared option bundles ----------------------------------------------

struct DistanceOptions {
    std::string kind = "EUCL";
    bool mixture = false;
    double w = 0.5;

    void attach(CLI::App* cmd) {
        cmd->add_option("--distance", kind, "Distance kind: eucl, dtw or infnorm")
            ->capture_default_str();
        cmd->add_flag("--mixture", mixture,
                      "Blend the chosen distance with the Euclidean one");
        cmd->add_option("--w", w, "Euclidean weight of the mixture, in [0, 1]")
            ->capture_default_str();
    }

    dist::DistanceSpec spec() const {
        dist::DistanceSpec s;
        s.kind = dist::canonical_kind(kind);
        s.mixture = mixture;
        s.w = w;
        s.validate();
        return s;
    }
};

struct FeatureOptions {
    std::string names = "log_variance";

    void attach(CLI::App* cmd) {
        cmd->add_option("--features", names,
                        "Comma-separated statistics: log_variance, variance, max, min, iqr")
            ->capture_default_str();
    }

    csp::FeatureSpec spec() const { return csp::FeatureSpec::parse(split_list(names)); }
};

struct SeedOption {
    std::uint64_t value = 0;
    CLI::Option* opt = nullptr;

    void attach(CLI::App* cmd) {
        opt = cmd->add_option("--seed", value, "RNG seed; omit for a fresh random partition");
    }

    std::optional<std::uint64_t> get() const {
        return opt->count() > 0 ? std::optional<std::uint64_t>(value) : std::nullopt;
    }
};

json distance_json(const dist::DistanceSpec& spec) {
    return json{{"kind", dist::canonical_kind(spec.kind)},
                {"mixture", spec.mixture},
                {"w", spec.w}};
}

json features_json(const csp::FeatureSpec& fspec) {
    json names = json::array();
    for (csp::FeatureKind kind : fspec.kinds) names.push_back(csp::to_string(kind));
    return names;
}

json cv_json(const classify::CvReport& report) {
    return json{{"folds", report.fold_accuracies.size()},
                {"fold_accuracies", report.fold_accuracies},
                {"mean_acc", report.mean_acc},
                {"sd_acc", report.sd_acc},
                {"fold_membership", report.fold_membership}};
}

// ---- subcommands ---------------------------------------------------------

struct GenerateOpts {
    std::string out;
    io::SyntheticSpec spec;
};

void cmd_generate(const GenerateOpts& o) {
    const LabeledDataset data = io::generate_synthetic(o.spec);
    const std::filesystem::path manifest = io::save_dataset(data, o.out);
    std::printf("Wrote %d + %d trials of dimension [%dx%d] to %s\n", o.spec.n1, o.spec.n2,
                o.spec.channels, o.spec.samples, manifest.string().c_str());
}

struct InfoOpts {
    std::string dataset;
    std::string model;
    std::string out;
    int q = 15;
    DistanceOptions distance;
};

/// Uniform sample count of a class, 0 when trials differ.
int class_samples(const std::vector<Trial>& trials) {
    const Eigen::Index samples = trials.front().samples();
    for (const Trial& t : trials) {
        if (t.samples() != samples) return 0;
    }
    return static_cast<int>(samples);
}

void cmd_info(const InfoOpts& o) {
    const LabeledDataset data = io::load_dataset(o.dataset);
    std::optional<classify::CspPipelineModel> model;
    if (!o.model.empty()) model = io::load_model(o.model);

    json classes = json::array();
    for (const auto& [label, trials] :
         {std::pair{data.label1(), &data.class1()}, std::pair{data.label2(), &data.class2()}}) {
        const int samples = class_samples(*trials);
        const std::string dims = std::to_string(data.channels()) + "x" +
                                 (samples > 0 ? std::to_string(samples) : std::string("var"));
        std::printf("There are %zu instances of class %s with [%s] dimension.\n",
                    trials->size(), label.c_str(), dims.c_str());
        classes.push_back({{"label", label}, {"count", trials->size()}, {"samples", samples}});
    }

    json report{{"channels", data.channels()}, {"classes", std::move(classes)}};
    if (model) {
        const auto& m = *model;
        std::printf("The model uses distance %s with q=%d and selected_q=%d.\n",
                    dist::canonical_kind(m.filters.distance.kind).c_str(), m.filters.q,
                    m.selected_q);
        report["q"] = m.filters.q;
        report["selected_q"] = m.selected_q;
        report["distance"] = distance_json(m.filters.distance);
        report["features"] = features_json(m.features);
        report["trained"] = true;
        if (m.cv) {
            std::printf(
                "An accuracy of %s has been obtained with %zu fold cross-validation using %d "
                "vectors when training.\n",
                acc_str(m.cv->mean_acc).c_str(), m.cv->fold_accuracies.size(), m.selected_q);
            report["cv"] = cv_json(*m.cv);
        }
    } else {
        std::printf("The q parameter is %d and the distance is %s.\n", o.q,
                    dist::canonical_kind(o.distance.kind).c_str());
        std::printf("Training has not been performed yet.\n");
        report["q"] = o.q;
        report["distance"] = distance_json(o.distance.spec());
        report["trained"] = false;
    }
    if (!o.out.empty()) write_report(o.out, report);
}

struct EvaluateOpts {
    std::string dataset;
    std::string out;
    int q = 15;
    int folds = 10;
    DistanceOptions distance;
    FeatureOptions features;
    SeedOption seed;
};

void cmd_evaluate(const EvaluateOpts& o) {
    const LabeledDataset data = io::load_dataset(o.dataset);
    check_q(o.q, data.channels());
    const dist::DistanceSpec dspec = o.distance.spec();
    const csp::FeatureSpec fspec = o.features.spec();
    classify::CvConfig cfg;
    cfg.folds = o.folds;
    cfg.seed = o.seed.get();
    const classify::CvReport report = classify::cross_validate(data, o.q, dspec, fspec, cfg);

    std::printf("fold accuracies:");
    for (double acc : report.fold_accuracies) std::printf(" %s", acc_str(acc).c_str());
    std::printf("\nMean accuracy %s (sd %s) with %d fold cross-validation at q=%d.\n",
                acc_str(report.mean_acc).c_str(), acc_str(report.sd_acc).c_str(), o.folds, o.q);

    if (!o.out.empty()) {
        json j{{"q", o.q},
               {"folds", o.folds},
               {"distance", distance_json(dspec)},
               {"features", features_json(fspec)},
               {"fold_accuracies", report.fold_accuracies},
               {"mean_acc", report.mean_acc},
               {"sd_acc", report.sd_acc},
               {"fold_membership", report.fold_membership}};
        if (cfg.seed) j["seed"] = *cfg.seed;
        write_report(o.out, j);
    }
}

struct SelectQOpts {
    std::string dataset;
    std::string out;
    std::string grid = "1,2,3,5,10,15";
    bool cv = false;
    double train_size = 0.75;
    int folds = 10;
    DistanceOptions distance;
    FeatureOptions features;
    SeedOption seed;
};

void cmd_select_q(const SelectQOpts& o) {
    const LabeledDataset data = io::load_dataset(o.dataset);
    const std::vector<int> grid = parse_grid(o.grid);
    const dist::DistanceSpec dspec = o.distance.spec();
    const csp::FeatureSpec fspec = o.features.spec();
    classify::CvConfig cfg;
    cfg.folds = o.folds;
    cfg.seed = o.seed.get();
    const classify::SelectQMode mode =
        o.cv ? classify::SelectQMode::Cv : classify::SelectQMode::Holdout;
    const classify::SelectQReport report =
        classify::select_q(data, grid, dspec, fspec, mode, o.train_size, cfg);

    std::size_t best = 0;
    if (o.cv) {
        std::printf("%6s %12s %12s\n", "q", "acc", "sd");
    } else {
        std::printf("%6s %12s\n", "q", "acc");
    }
    for (std::size_t i = 0; i < report.size(); ++i) {
        if (report[i].accuracy > report[best].accuracy) best = i;
        if (report[i].sd) {
            std::printf("%6d %12s %12s\n", report[i].q, acc_str(report[i].accuracy).c_str(),
                        acc_str(*report[i].sd).c_str());
        } else {
            std::printf("%6d %12s\n", report[i].q, acc_str(report[i].accuracy).c_str());
        }
    }
    std::printf("Best q: %d (accuracy %s)\n", report[best].q,
                acc_str(report[best].accuracy).c_str());

    if (!o.out.empty()) {
        json rows = json::array();
        for (const classify::SelectQRow& row : report) {
            json r{{"q", row.q}, {"accuracy", row.accuracy}};
            if (row.sd) r["sd"] = *row.sd;
            rows.push_back(std::move(r));
        }
        json j{{"mode", o.cv ? "cv" : "holdout"},
               {"rows", std::move(rows)},
               {"best_q", report[best].q},
               {"distance", distance_json(dspec)},
               {"features", features_json(fspec)}};
        if (o.cv) {
            j["folds"] = o.folds;
        } else {
            j["train_size"] = o.train_size;
        }
        if (cfg.seed) j["seed"] = *cfg.seed;
        write_report(o.out, j);
    }
}

struct FitOpts {
    std::string dataset;
    std::string model;
    std::string out;
    int q = 15;
    int selected_q = 0;  // 0 = use q
    int folds = 10;
    DistanceOptions distance;
    FeatureOptions features;
    SeedOption seed;
};

void cmd_fit(const FitOpts& o) {
    const LabeledDataset data = io::load_dataset(o.dataset);
    check_q(o.q, data.channels());
    const int selected_q = o.selected_q > 0 ? o.selected_q : o.q;
    const dist::DistanceSpec dspec = o.distance.spec();
    const csp::FeatureSpec fspec = o.features.spec();
    classify::CvConfig cfg;
    cfg.folds = o.folds;
    cfg.seed = o.seed.get();
    const classify::CspPipelineModel model =
        classify::train_pipeline(data, o.q, selected_q, dspec, fspec, cfg);
    io::save_model(model, o.model);

    std::printf("Fitted filters with q=%d (selected_q=%d, distance %s).\n", o.q, selected_q,
                dist::canonical_kind(dspec.kind).c_str());
    if (model.cv) {
        std::printf(
            "An accuracy of %s has been obtained with %d fold cross-validation using %d vectors "
            "when training.\n",
            acc_str(model.cv->mean_acc).c_str(), o.folds, selected_q);
    }
    std::printf("Model written to %s\n", o.model.c_str());

    if (!o.out.empty()) {
        json j{{"q", o.q},
               {"selected_q", selected_q},
               {"labels", {data.label1(), data.label2()}},
               {"distance", distance_json(dspec)},
               {"features", features_json(fspec)},
               {"folds", o.folds}};
        if (model.cv) j["cv"] = cv_json(*model.cv);
        if (cfg.seed) j["seed"] = *cfg.seed;
        write_report(o.out, j);
    }
}

struct PredictOpts {
    std::string dataset;
    std::string model;
    std::string out;
    bool true_targets = false;
};

void cmd_predict(const PredictOpts& o) {
    const classify::CspPipelineModel model = io::load_model(o.model);
    const LabeledDataset data = io::load_dataset(o.dataset);

    std::vector<Trial> trials;
    trials.reserve(data.size());
    for (const Trial& t : data.class1()) trials.push_back(t);
    for (const Trial& t : data.class2()) trials.push_back(t);

    std::optional<std::vector<std::string>> targets;
    if (o.true_targets) {
        std::vector<std::string> labels(data.class1().size(), data.label1());
        labels.insert(labels.end(), data.class2().size(), data.label2());
        targets = std::move(labels);
    }

    const classify::PredictionResult result =
        classify::predict_pipeline(model, trials, targets);
    for (std::size_t i = 0; i < result.labels.size(); ++i) {
        std::printf("trial %zu: %s\n", i + 1, result.labels[i].c_str());
    }
    if (result.accuracy) {
        std::printf("accuracy: %s\n", acc_str(*result.accuracy).c_str());
    }

    if (!o.out.empty()) {
        json scores = json::array();
        for (Eigen::Index i = 0; i < result.scores.rows(); ++i) {
            scores.push_back({result.scores(i, 0), result.scores(i, 1)});
        }
        json j{{"labels", result.labels}, {"scores", std::move(scores)}};
        if (result.accuracy) j["accuracy"] = *result.accuracy;
        write_report(o.out, j);
    }
}

struct PlotOpts {
    std::string dataset;
    std::string model;
    std::string out;
    int cls = 1;
    int index = 1;
    std::string vectors = "1";
    bool pairs = true;
    bool before = true;
    bool after = true;
    bool legend = false;
};

void cmd_plot(const PlotOpts& o) {
    if (!o.before && !o.after) {
        throw ConfigError("nothing to draw: --no-before and --no-after are both set");
    }
    const LabeledDataset data = io::load_dataset(o.dataset);
    const classify::CspPipelineModel model = io::load_model(o.model);
    if (o.cls != 1 && o.cls != 2) {
        throw ConfigError("--class must be 1 or 2, got " + std::to_string(o.cls));
    }
    const auto& trials = o.cls == 1 ? data.class1() : data.class2();
    const std::string& label = o.cls == 1 ? data.label1() : data.label2();
    if (o.index < 1 || static_cast<std::size_t>(o.index) > trials.size()) {
        throw ConfigError("--index must lie in 1.." + std::to_string(trials.size()) +
                          " for class " + std::to_string(o.cls) + ", got " +
                          std::to_string(o.index));
    }
    const Trial& raw = trials[static_cast<std::size_t>(o.index - 1)];

    const int panels = (o.before ? 1 : 0) + (o.after ? 1 : 0);
    const double panel_h = 280.0;
    svg::Document doc(900.0, 20.0 + panel_h * panels + 10.0 * (panels - 1));
    double y = 10.0;

    if (o.before) {
        std::vector<svg::Series> series;
        for (Eigen::Index i = 0; i < raw.channels(); ++i) {
            svg::Series s;
            s.values.assign(raw.data().row(i).begin(), raw.data().row(i).end());
            s.color = kPalette[static_cast<std::size_t>(i) % kPaletteSize];
            s.label = "ch" + std::to_string(i + 1);
            series.push_back(std::move(s));
        }
        svg::line_panel(doc, 10.0, y, 880.0, panel_h,
                        "class " + label + ", trial " + std::to_string(o.index) +
                            ": original signals",
                        series, false);
        y += panel_h + 10.0;
    }
    if (o.after) {
        const Trial projected = csp::project(csp::standardize_trial(raw), model.filters);
        const std::vector<int> columns =
            expand_vectors(parse_selectors(o.vectors), model.filters.q, o.pairs);
        std::vector<svg::Series> series;
        for (std::size_t k = 0; k < columns.size(); ++k) {
            const int column = columns[k];
            svg::Series s;
            s.values.assign(projected.data().row(column - 1).begin(),
                            projected.data().row(column - 1).end());
            s.color = kPalette[k % kPaletteSize];
            s.dashed = column > model.filters.q;
            s.label = column_name(column, model.filters.q);
            series.push_back(std::move(s));
        }
        svg::line_panel(doc, 10.0, y, 880.0, panel_h,
                        "class " + label + ", trial " + std::to_string(o.index) +
                            ": projections",
                        series, o.legend);
    }
    doc.save(o.out);
    std::printf("Wrote %s\n", o.out.c_str());
}

struct BoxplotOpts {
    std::string dataset;
    std::string model;
    std::string out;
    std::string vectors = "1";
    bool pairs = true;
    bool show_log = true;
};

void cmd_boxplot(const BoxplotOpts& o) {
    const LabeledDataset data = io::load_dataset(o.dataset);
    const classify::CspPipelineModel model = io::load_model(o.model);
    const std::vector<int> columns =
        expand_vectors(parse_selectors(o.vectors), model.filters.q, o.pairs);

    csp::FeatureSpec fspec;
    fspec.kinds = {o.show_log ? csp::FeatureKind::LogVariance : csp::FeatureKind::Variance};
    const Eigen::MatrixXd f1 = classify::feature_matrix(data.class1(), model.filters, fspec);
    const Eigen::MatrixXd f2 = classify::feature_matrix(data.class2(), model.filters, fspec);

    std::vector<svg::Box> boxes;
    for (int column : columns) {
        const std::string name = column_name(column, model.filters.q);
        for (const auto& [features, label, fill] :
             {std::tuple{&f1, data.label1(), kClassFills[0]},
              std::tuple{&f2, data.label2(), kClassFills[1]}}) {
            svg::Box box;
            const Eigen::VectorXd col = features->col(column - 1);
            box.values.assign(col.begin(), col.end());
            box.fill = fill;
            box.label = name + " " + label;
            boxes.push_back(std::move(box));
        }
    }

    svg::Document doc(900.0, 440.0);
    svg::box_panel(doc, 10.0, 10.0, 880.0, 420.0,
                   o.show_log ? "log-variance of projected signals"
                              : "variance of projected signals",
                   boxes);
    doc.save(o.out);
    std::printf("Wrote %s\n", o.out.c_str());
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"CSP / DB-CSP two-class classification of multichannel signal trials"};
    app.require_subcommand(1);

    GenerateOpts gen;
    auto* cgen = app.add_subcommand("generate", "Write a seeded synthetic dataset");
    cgen->add_option("--out", gen.out, "Output dataset directory")->required();
    cgen->add_option("--channels", gen.spec.channels, "Channels per trial")
        ->capture_default_str();
    cgen->add_option("--samples", gen.spec.samples, "Samples per trial")->capture_default_str();
    cgen->add_option("--n1", gen.spec.n1, "Trials in class 1")->capture_default_str();
    cgen->add_option("--n2", gen.spec.n2, "Trials in class 2")->capture_default_str();
    cgen->add_option("--variance-ratio", gen.spec.variance_ratio,
                     "Latent variance contrast between the classes (> 1)")
        ->capture_default_str();
    cgen->add_option("--noise-sd", gen.spec.noise_sd, "Additive Gaussian noise level")
        ->capture_default_str();
    cgen->add_option("--mixing-seed", gen.spec.mixing_seed, "Seed of the mixing matrix")
        ->capture_default_str();
    cgen->add_option("--seed", gen.spec.seed, "Seed of the signal draws")
        ->capture_default_str();
    cgen->callback([&] { cmd_generate(gen); });

    InfoOpts info;
    auto* cinfo = app.add_subcommand("info", "Summarize a dataset and optional model");
    cinfo->add_option("--dataset", info.dataset, "Dataset manifest path")->required();
    cinfo->add_option("--model", info.model, "Trained model to summarize");
    cinfo->add_option("--out", info.out, "JSON report path");
    cinfo->add_option("--q", info.q, "Filter pairs per class")->capture_default_str();
    info.distance.attach(cinfo);
    cinfo->callback([&] { cmd_info(info); });

    EvaluateOpts eval;
    auto* ceval = app.add_subcommand("evaluate", "Cross-validated accuracy at a fixed q");
    ceval->add_option("--dataset", eval.dataset, "Dataset manifest path")->required();
    ceval->add_option("--out", eval.out, "JSON report path");
    ceval->add_option("--q", eval.q, "Filter pairs per class")->capture_default_str();
    ceval->add_option("--folds", eval.folds, "Cross-validation folds")->capture_default_str();
    eval.distance.attach(ceval);
    eval.features.attach(ceval);
    eval.seed.attach(ceval);
    ceval->callback([&] { cmd_evaluate(eval); });

    SelectQOpts sel;
    auto* csel = app.add_subcommand("select-q", "Accuracy over a grid of dimensions");
    csel->add_option("--dataset", sel.dataset, "Dataset manifest path")->required();
    csel->add_option("--out", sel.out, "JSON report path");
    csel->add_option("--q", sel.grid, "Comma-separated dimension grid")->capture_default_str();
    csel->add_flag("--cv", sel.cv, "Cross-validate each dimension instead of one holdout split");
    csel->add_option("--train-size", sel.train_size, "Training fraction of the holdout split")
        ->capture_default_str();
    csel->add_option("--folds", sel.folds, "Folds when --cv is set")->capture_default_str();
    sel.distance.attach(csel);
    sel.features.attach(csel);
    sel.seed.attach(csel);
    csel->callback([&] { cmd_select_q(sel); });

    FitOpts fit;
    auto* cfit = app.add_subcommand("fit", "Train a model and save it");
    cfit->add_option("--dataset", fit.dataset, "Dataset manifest path")->required();
    cfit->add_option("--model", fit.model, "Output model path")->required();
    cfit->add_option("--out", fit.out, "JSON report path");
    cfit->add_option("--q", fit.q, "Filter pairs per class")->capture_default_str();
    cfit->add_option("--selected-q", fit.selected_q,
                     "Pairs kept for classification (default: q)");
    cfit->add_option("--folds", fit.folds, "Cross-validation folds")->capture_default_str();
    fit.distance.attach(cfit);
    fit.features.attach(cfit);
    fit.seed.attach(cfit);
    cfit->callback([&] { cmd_fit(fit); });

    PredictOpts pred;
    auto* cpred = app.add_subcommand("predict", "Classify trials with a saved model");
    cpred->add_option("--model", pred.model, "Trained model path")->required();
    cpred->add_option("--dataset", pred.dataset, "Trials to classify (dataset manifest)")
        ->required();
    cpred->add_option("--out", pred.out, "JSON report path");
    cpred->add_flag("--true-targets", pred.true_targets,
                    "Score predictions against the labels in the dataset manifest");
    cpred->callback([&] { cmd_predict(pred); });

    PlotOpts plot;
    auto* cplot = app.add_subcommand("plot", "SVG of one trial and its projections");
    cplot->add_option("--dataset", plot.dataset, "Dataset manifest path")->required();
    cplot->add_option("--model", plot.model, "Trained model path")->required();
    cplot->add_option("--out", plot.out, "Output SVG path")->required();
    cplot->add_option("--class", plot.cls, "Class of the trial (1 or 2)")->capture_default_str();
    cplot->add_option("--index", plot.index, "Trial index within the class, 1-based")
        ->capture_default_str();
    cplot->add_option("--vectors", plot.vectors, "Projection selectors, e.g. 1:2 or 3")
        ->capture_default_str();
    cplot->add_flag("--pairs,!--no-pairs", plot.pairs,
                    "Include the paired filter of each selector");
    cplot->add_flag("--before,!--no-before", plot.before, "Draw the original signals panel");
    cplot->add_flag("--after,!--no-after", plot.after, "Draw the projections panel");
    cplot->add_flag("--legend", plot.legend, "Label the projection curves");
    cplot->callback([&] { cmd_plot(plot); });

    BoxplotOpts box;
    auto* cbox = app.add_subcommand("boxplot", "SVG boxplots of projected variances per class");
    cbox->add_option("--dataset", box.dataset, "Dataset manifest path")->required();
    cbox->add_option("--model", box.model, "Trained model path")->required();
    cbox->add_option("--out", box.out, "Output SVG path")->required();
    cbox->add_option("--vectors", box.vectors, "Projection selectors, e.g. 1:2 or 3")
        ->capture_default_str();
    cbox->add_flag("--pairs,!--no-pairs", box.pairs,
                   "Include the paired filter of each selector");
    cbox->add_flag("--show-log,!--no-show-log", box.show_log,
                   "Plot ln(variance) instead of raw variance");
    cbox->callback([&] { cmd_boxplot(box); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help and friends
        }
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace dbcsp::cli
