// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/commands.hpp"

#include "stripml/color.hpp"
#include "stripml/error.hpp"
#include "stripml/features.hpp"
#include "stripml/hash.hpp"
#include "stripml/model_io.hpp"
#include "stripml/parallel.hpp"
#include "stripml/report.hpp"
#include "stripml/synth.hpp"

#include <fmt/core.h>
#include <json.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace stripml {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw FormatError(fmt::format("failed writing '{}'", path.string()));
}

void write_echo(const fs::path& path, const json& echo) { write_text_file(path, echo.dump(2) + "\n"); }

std::string file_digest(const fs::path& path) { return to_hex(fnv1a64(read_text_file(path))); }

json classifier_echo(const ClassifierOptions& options) {
    json j;
    j["classifier"] = to_string(options.kind);
    j["sigma"] = options.sigma ? json(*options.sigma) : json(nullptr);
    j["gamma"] = options.gamma;
    j["c"] = options.c;
    j["standardize"] = options.standardize;
    return j;
}

std::string describe_regularization(const ClassifierOptions& options) {
    return options.kind == ClassifierKind::lssvm ? fmt::format("gamma: {}", format_real(options.gamma))
                                                 : fmt::format("C: {}", format_real(options.c));
}

Features features_from_image(const fs::path& image_path, const Quad& corners, std::optional<SourceFormat> format,
                             double inner_margin, double panel_margin) {
    const ImageRGB image = load_image(image_path);
    const StripImage strip = format ? normalize_strip(image, corners, *format) : normalize_strip(image, corners);
    return extract_features(inner_crop(strip, inner_margin), PanelLayout::quarters(panel_margin));
}

/// Features stored next to a manifest, checked row by row against it.
LabeledDataset manifest_features(const fs::path& manifest_path, const std::vector<ManifestRow>& rows) {
    const fs::path features_path = manifest_path.parent_path() / "features.csv";
    LabeledDataset data = read_features_csv(features_path);
    if (data.size() != rows.size()) {
        throw FormatError(fmt::format("'{}' has {} rows but manifest '{}' lists {}", features_path.string(),
                                      data.size(), manifest_path.string(), rows.size()));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& name = data.class_names[static_cast<std::size_t>(data.labels[i])];
        if (name != rows[i].class_name) {
            throw FormatError(fmt::format("{}: row {} is class '{}' but manifest says '{}'", features_path.string(),
                                          i + 2, name, rows[i].class_name));
        }
    }
    return data;
}

std::string prediction_header(const MultiClassModel& model) {
    std::string header = "index,truth,predicted";
    for (const auto& name : model.class_labels) header += ",votes:" + name;
    for (const auto& name : model.class_labels) header += ",margin:" + name;
    return header;
}

std::string prediction_line(std::size_t index, const PredictionRecord& r) {
    std::string line = fmt::format("{},{},{}", index, r.truth, r.predicted);
    for (int v : r.detail.votes) line += fmt::format(",{}", v);
    for (double m : r.detail.margins) line += "," + format_real(m);
    return line;
}

PredictionRecord predict_record(const MultiClassModel& model, std::span<const double> x, std::string truth) {
    PredictionRecord r;
    r.truth = std::move(truth);
    r.detail = predict_multiclass(model, x);
    r.predicted = model.class_labels[static_cast<std::size_t>(r.detail.label)];
    return r;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Quad parse_corners(const std::string& text) {
    const auto fields = split_csv_line(text);
    if (fields.size() != 8) {
        throw InvalidArgument(fmt::format("corners need 8 comma-separated numbers, got {}", fields.size()));
    }
    Quad q;
    for (std::size_t i = 0; i < 8; ++i) {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(fields[i], &used);
            if (used != fields[i].size()) throw std::invalid_argument(fields[i]);
        } catch (const std::exception&) {
            throw InvalidArgument(fmt::format("corner value '{}' is not a number", fields[i]));
        }
        (i % 2 == 0 ? q.corners[i / 2].x : q.corners[i / 2].y) = v;
    }
    return q;
}

TrainerConfig ClassifierOptions::trainer(int threads) const {
    TrainerConfig config;
    config.kind = kind;
    config.sigma = sigma;
    config.gamma = gamma;
    config.c = c;
    config.standardize = standardize;
    config.threads = threads;
    return config;
}

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(fmt::format("run config is not valid JSON: {}", e.what()));
    }
    if (!root.is_object()) throw FormatError("run config must be a JSON object");
    RunConfig rc;
    try {
        if (root.contains("classifier")) rc.classifier = classifier_kind_from_string(root.at("classifier").get<std::string>());
        if (root.contains("sigma") && !root.at("sigma").is_null()) rc.sigma = root.at("sigma").get<double>();
        if (root.contains("gamma")) rc.gamma = root.at("gamma").get<double>();
        if (root.contains("c")) rc.c = root.at("c").get<double>();
        if (root.contains("standardize")) rc.standardize = root.at("standardize").get<bool>();
        if (root.contains("k")) rc.k = root.at("k").get<std::size_t>();
        if (root.contains("seed")) rc.seed = root.at("seed").get<std::uint64_t>();
        if (root.contains("stratified")) rc.stratified = root.at("stratified").get<bool>();
    } catch (const json::exception& e) {
        throw FormatError(fmt::format("run config: {}", e.what()));
    }
    return rc;
}

std::size_t cmd_synth(const SynthArgs& args) {
    const std::string text = read_text_file(args.config);
    DatasetConfig config = dataset_config_from_json(text, args.config.parent_path());
    if (args.seed) config.seed = *args.seed;
    config.threads = args.threads;
    fs::create_directories(args.out);
    if (config.write_images) config.image_dir = args.out / "images";
    const GeneratedDataset generated = generate_dataset(config);
    write_features_csv(generated.features, args.out / "features.csv");
    write_manifest(generated.manifest, args.out / "manifest.csv");

    json echo = json::parse(text);
    echo["seed"] = config.seed;
    if (echo.contains("palette_file")) {
        fs::path file = echo["palette_file"].get<std::string>();
        if (file.is_relative()) file = args.config.parent_path() / file;
        echo["palette_file"] = fs::absolute(file).lexically_normal().string();
    }
    write_echo(args.out / "synth_config.json", echo);
    return generated.features.size();
}

StripImage cmd_preprocess(const PreprocessArgs& args) {
    ImageRGB image = load_image(args.image);
    const SourceFormat format = args.format.value_or(
        image.encoding() == Encoding::display_referred ? SourceFormat::jpeg : SourceFormat::raw);
    if (args.neutral) image = white_balance(image, *args.neutral, args.neutral_target);
    if (args.calibration) {
        const ColorMatrix m = fit_color_matrix(read_calibration_target(*args.calibration));
        image = apply_color_matrix(image, m, xyz_d50_to_srgb());
    }
    const StripImage strip = inner_crop(normalize_strip(image, args.corners, format), args.inner_margin);
    fs::create_directories(args.out);
    save_png(strip.raster(), args.out / "strip.png", 16);

    json echo;
    echo["command"] = "preprocess";
    echo["image"] = args.image.string();
    echo["image_fnv1a64"] = file_digest(args.image);
    std::vector<double> corners;
    for (const auto& p : args.corners.corners) {
        corners.push_back(p.x);
        corners.push_back(p.y);
    }
    echo["corners"] = corners;
    echo["format"] = to_string(format);
    echo["neutral"] = args.neutral ? json(std::vector<double>(args.neutral->begin(), args.neutral->end())) : json(nullptr);
    echo["neutral_target"] = args.neutral_target;
    echo["calibration"] = args.calibration ? json(args.calibration->string()) : json(nullptr);
    echo["inner_margin"] = args.inner_margin;
    write_echo(args.out / "preprocess_config.json", echo);
    return strip;
}

LabeledDataset cmd_extract(const ExtractArgs& args) {
    const auto rows = read_manifest(args.manifest);
    if (rows.empty()) throw InvalidArgument(fmt::format("manifest '{}' lists no images", args.manifest.string()));
    const fs::path base = args.manifest.parent_path();
    std::vector<FeatureVector> vectors(rows.size());
    parallel_for(rows.size(), args.threads, [&](std::size_t i) {
        try {
            vectors[i] = features_from_image(base / rows[i].filename, rows[i].quad, rows[i].format, args.inner_margin,
                                             args.panel_margin)
                             .vector;
        } catch (const Error& e) {
            throw FormatError(fmt::format("{}: {}", rows[i].filename, e.what()));
        }
    });
    LabeledDataset data;
    data.inputs.resize(static_cast<Eigen::Index>(rows.size()), feature_dims);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        data.labels.push_back(data.intern_class(rows[i].class_name));
        data.inputs.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
    }
    fs::create_directories(args.out);
    write_features_csv(data, args.out / "features.csv");

    json echo;
    echo["command"] = "extract";
    echo["manifest"] = args.manifest.string();
    echo["manifest_fnv1a64"] = file_digest(args.manifest);
    echo["inner_margin"] = args.inner_margin;
    echo["panel_margin"] = args.panel_margin;
    write_echo(args.out / "extract_config.json", echo);
    return data;
}

MultiClassModel cmd_train(const TrainArgs& args) {
    const LabeledDataset data = read_features_csv(args.features);
    const MultiClassModel model = train_multiclass(data, args.classifier.trainer(args.threads));
    fs::create_directories(args.out);
    save_model(model, args.out / "model.json");

    std::string summary;
    summary += fmt::format("classifier: {}\n", to_string(model.kind));
    summary += fmt::format("samples: {}\n", data.size());
    summary += fmt::format("classes: {}\n", model.class_count());
    for (const auto& name : model.class_labels) summary += fmt::format("  {}\n", name);
    summary += fmt::format("pairwise models: {}\n", model.pairs.size());
    summary += fmt::format("kernel: rbf, sigma {}{}\n", format_real(model.pairs.front().model.kernel.sigma),
                           args.classifier.sigma ? "" : " (median pairwise distance)");
    summary += describe_regularization(args.classifier) + "\n";
    summary += fmt::format("standardize: {}\n", args.classifier.standardize ? "yes" : "no");
    write_text_file(args.out / "train_summary.txt", summary);

    json echo = classifier_echo(args.classifier);
    echo["command"] = "train";
    echo["features"] = args.features.string();
    echo["features_fnv1a64"] = file_digest(args.features);
    write_echo(args.out / "train_config.json", echo);
    return model;
}

std::vector<PredictionRecord> cmd_predict(const PredictArgs& args, std::ostream& sink) {
    if (args.features.has_value() == args.image.has_value()) {
        throw InvalidArgument("predict needs exactly one of a features CSV or an image");
    }
    const MultiClassModel model = load_model(args.model);
    std::vector<PredictionRecord> records;
    if (args.features) {
        const LabeledDataset data = read_features_csv(*args.features);
        if (data.dims() != model.dims) {
            throw InvalidArgument(
                fmt::format("features have dimension {}, model expects {}", data.dims(), model.dims));
        }
        for (std::size_t i = 0; i < data.size(); ++i) {
            records.push_back(predict_record(model, row_span(data.inputs, static_cast<Eigen::Index>(i)),
                                             data.class_names[static_cast<std::size_t>(data.labels[i])]));
        }
    } else {
        if (!args.corners) throw InvalidArgument("image prediction needs the strip corners");
        const Features f =
            features_from_image(*args.image, *args.corners, std::nullopt, args.inner_margin, args.panel_margin);
        records.push_back(predict_record(model, std::span<const double>(f.vector.data(), feature_dims), ""));
    }

    std::string table = prediction_header(model) + "\n";
    for (std::size_t i = 0; i < records.size(); ++i) table += prediction_line(i, records[i]) + "\n";
    sink << table;
    if (args.out) {
        fs::create_directories(*args.out);
        write_text_file(*args.out / "predictions.csv", table);
        json echo;
        echo["command"] = "predict";
        echo["model"] = args.model.string();
        echo["model_fnv1a64"] = file_digest(args.model);
        if (args.features) {
            echo["features"] = args.features->string();
            echo["features_fnv1a64"] = file_digest(*args.features);
        } else {
            echo["image"] = args.image->string();
            echo["image_fnv1a64"] = file_digest(*args.image);
            std::vector<double> corners;
            for (const auto& p : args.corners->corners) {
                corners.push_back(p.x);
                corners.push_back(p.y);
            }
            echo["corners"] = corners;
        }
        echo["inner_margin"] = args.inner_margin;
        echo["panel_margin"] = args.panel_margin;
        write_echo(*args.out / "predict_config.json", echo);
    }
    return records;
}

fs::path cmd_crossval(const CrossvalArgs& args) {
    if (args.k < 2) throw InvalidArgument(fmt::format("k must be at least 2, got {}", args.k));
    const LabeledDataset data = read_features_csv(args.features);

    json echo = classifier_echo(args.classifier);
    echo["command"] = "crossval";
    echo["features_fnv1a64"] = file_digest(args.features);
    echo["k"] = args.k;
    echo["seed"] = args.seed;
    echo["stratified"] = args.stratified;
    const std::string run_name = fmt::format("{}-seed{}", to_hex(fnv1a64(echo.dump())), args.seed);
    echo["features"] = args.features.string();

    CrossValidationOptions options;
    options.k = args.k;
    options.seed = args.seed;
    options.stratified = args.stratified;
    options.threads = args.threads;
    const CrossValidationResult result = cross_validate(data, args.classifier.trainer(1), options);

    const fs::path run_dir = args.out / run_name;
    fs::create_directories(run_dir);
    write_echo(run_dir / "config.json", echo);
    write_class_table(run_dir / "per_class.csv", result.classes);
    write_predictions(run_dir / "predictions.csv", data.class_names, data.labels, result);
    const std::string curve_name = to_string(args.classifier.kind);
    const std::vector<NamedCurve> curves{{curve_name, result.roc, result.auc}};
    write_roc_csv(run_dir / "roc.csv", curves);
    write_roc_svg(run_dir / "roc.svg", curves, fmt::format("{}-fold cross-validation, micro-averaged ROC", args.k));

    std::string summary;
    summary += fmt::format("classifier: {}\n", curve_name);
    summary += fmt::format("samples: {}\n", data.size());
    summary += fmt::format("classes: {}\n", data.class_count());
    summary += fmt::format("folds: {} ({})\n", args.k, result.plan.stratified ? "stratified" : "unstratified");
    summary += fmt::format("seed: {}\n", args.seed);
    summary += fmt::format("sigma: {}\n", args.classifier.sigma ? format_real(*args.classifier.sigma)
                                                                 : std::string("median pairwise distance per fold"));
    summary += describe_regularization(args.classifier) + "\n";
    summary += fmt::format("overall accuracy: {:.4f}%\n", result.overall_accuracy);
    summary += fmt::format("micro-averaged AUC: {:.6f}\n", result.auc);
    summary += "per-class accuracy:\n";
    for (const auto& c : result.classes) summary += fmt::format("  {}: {:.4f}%\n", c.name, c.accuracy);
    write_text_file(run_dir / "summary.txt", summary);
    return run_dir;
}

std::vector<ConditionAccuracy> condition_accuracy(const MultiClassModel& model, const LabeledDataset& test,
                                                  const std::vector<std::string>& conditions) {
    if (conditions.size() != test.size()) {
        throw InvalidArgument(
            fmt::format("{} condition labels for {} test samples", conditions.size(), test.size()));
    }
    std::vector<int> to_model(test.class_names.size(), -1);
    for (std::size_t c = 0; c < test.class_names.size(); ++c) {
        for (int m = 0; m < model.class_count(); ++m) {
            if (model.class_labels[static_cast<std::size_t>(m)] == test.class_names[c]) to_model[c] = m;
        }
    }
    std::vector<ConditionAccuracy> out;
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const int truth = to_model[static_cast<std::size_t>(test.labels[i])];
        if (truth < 0) {
            throw InvalidArgument(fmt::format("test class '{}' is unknown to the model",
                                              test.class_names[static_cast<std::size_t>(test.labels[i])]));
        }
        auto [it, inserted] = slot.try_emplace(conditions[i], out.size());
        if (inserted) out.push_back({conditions[i], 0, 0, 0.0});
        auto& row = out[it->second];
        row.samples += 1;
        const Prediction p = predict_multiclass(model, row_span(test.inputs, static_cast<Eigen::Index>(i)));
        row.correct += p.label == truth ? 1 : 0;
    }
    for (auto& row : out) row.accuracy = 100.0 * static_cast<double>(row.correct) / static_cast<double>(row.samples);
    return out;
}

std::vector<ConditionAccuracy> cmd_dualillum(const DualIllumArgs& args) {
    const auto train_rows = read_manifest(args.train_manifest);
    const auto test_rows = read_manifest(args.test_manifest);
    if (fs::exists(args.train_manifest) && fs::exists(args.test_manifest) &&
        fs::equivalent(args.train_manifest, args.test_manifest)) {
        throw InvalidArgument("training and test manifests are the same file; refusing train/test leakage");
    }
    std::set<std::uint64_t> train_seeds;
    for (const auto& r : train_rows) train_seeds.insert(r.seed);
    std::size_t shared = 0;
    const ManifestRow* first_shared = nullptr;
    for (const auto& r : test_rows) {
        if (train_seeds.contains(r.seed)) {
            if (first_shared == nullptr) first_shared = &r;
            ++shared;
        }
    }
    if (shared > 0) {
        throw InvalidArgument(fmt::format(
            "training and test manifests overlap in {} images (first: '{}', seed {}); refusing train/test leakage",
            shared, first_shared->filename, first_shared->seed));
    }
    const LabeledDataset train = manifest_features(args.train_manifest, train_rows);
    const LabeledDataset test = manifest_features(args.test_manifest, test_rows);
    const MultiClassModel model = train_multiclass(train, args.classifier.trainer(args.threads));

    std::vector<std::string> conditions;
    for (const auto& r : test_rows) conditions.push_back(r.illuminant);
    const auto results = condition_accuracy(model, test, conditions);

    fs::create_directories(args.out);
    std::string table = "condition,samples,correct,accuracy\n";
    for (const auto& r : results) {
        table += fmt::format("{},{},{},{}\n", r.condition, r.samples, r.correct, format_real(r.accuracy));
    }
    write_text_file(args.out / "dualillum.csv", table);
    json echo = classifier_echo(args.classifier);
    echo["command"] = "dualillum";
    echo["train_manifest"] = args.train_manifest.string();
    echo["train_manifest_fnv1a64"] = file_digest(args.train_manifest);
    echo["test_manifest"] = args.test_manifest.string();
    echo["test_manifest_fnv1a64"] = file_digest(args.test_manifest);
    write_echo(args.out / "dualillum_config.json", echo);
    return results;
}

void cmd_report(const ReportArgs& args) {
    if (args.runs.empty()) throw InvalidArgument("report needs at least one crossval run directory");
    struct Run {
        std::string name;
        std::vector<ClassReport> classes;
        NamedCurve curve;
    };
    std::vector<Run> runs;
    std::map<std::string, int> seen;
    for (const auto& dir : args.runs) {
        const RunConfig rc = parse_run_config(read_text_file(dir / "config.json"));
        std::string name = rc.classifier ? to_string(*rc.classifier) : dir.filename().string();
        if (const int n = ++seen[name]; n > 1) name += fmt::format("#{}", n);
        Run run{name, read_class_table(dir / "per_class.csv"), {}};
        const auto curves = read_roc_csv(dir / "roc.csv");
        if (curves.size() != 1) {
            throw FormatError(fmt::format("{}: expected one ROC curve, found {}", (dir / "roc.csv").string(),
                                          curves.size()));
        }
        run.curve = curves.front();
        run.curve.name = name;
        if (!runs.empty()) {
            const auto& ref = runs.front().classes;
            bool same = ref.size() == run.classes.size();
            for (std::size_t i = 0; same && i < ref.size(); ++i) same = ref[i].name == run.classes[i].name;
            if (!same) throw FormatError(fmt::format("run '{}' covers different classes", dir.string()));
        }
        runs.push_back(std::move(run));
    }

    fs::create_directories(args.out);
    std::string table = "class";
    for (const auto& r : runs) table += fmt::format(",{0}_accuracy,{0}_sensitivity,{0}_specificity", r.name);
    table += "\n";
    for (std::size_t i = 0; i < runs.front().classes.size(); ++i) {
        table += runs.front().classes[i].name;
        for (const auto& r : runs) {
            const auto& c = r.classes[i];
            table += fmt::format(",{},{},{}", format_real(c.accuracy), format_real(c.sensitivity),
                                 format_real(c.specificity));
        }
        table += "\n";
    }
    write_text_file(args.out / "comparison.csv", table);

    std::vector<NamedCurve> curves;
    for (const auto& r : runs) curves.push_back(r.curve);
    write_roc_csv(args.out / "roc.csv", curves);
    write_roc_svg(args.out / "roc.svg", curves, "Micro-averaged ROC comparison");

    std::string summary;
    for (const auto& r : runs) {
        std::int64_t correct = 0;
        std::size_t samples = 0;
        for (const auto& c : r.classes) {
            correct += c.counts.true_positive;
            samples += c.samples;
        }
        summary += fmt::format("{}: overall accuracy {:.4f}%, AUC {:.6f}\n", r.name,
                               samples > 0 ? 100.0 * static_cast<double>(correct) / static_cast<double>(samples) : 0.0,
                               r.curve.auc);
    }
    write_text_file(args.out / "summary.txt", summary);

    json echo;
    echo["command"] = "report";
    std::vector<std::string> dirs;
    for (const auto& d : args.runs) dirs.push_back(d.string());
    echo["runs"] = dirs;
    write_echo(args.out / "report_config.json", echo);
}

}  // namespace stripml
