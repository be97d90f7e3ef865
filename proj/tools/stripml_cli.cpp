// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/commands.hpp"
#include "stripml/error.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace stripml;

struct ClassifierFlags {
    std::string classifier = "lssvm";
    double sigma = 0.0;
    double gamma = 1.0;
    double c = 1.0;
    bool standardize = false;
    CLI::Option* classifier_opt = nullptr;
    CLI::Option* sigma_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* c_opt = nullptr;
    CLI::Option* standardize_opt = nullptr;

    void add(CLI::App* app) {
        classifier_opt = app->add_option("--classifier", classifier, "lssvm or svm")
                             ->check(CLI::IsMember({"lssvm", "svm"}));
        sigma_opt = app->add_option("--sigma", sigma, "RBF width (default: median pairwise distance)")
                        ->check(CLI::PositiveNumber);
        gamma_opt = app->add_option("--gamma", gamma, "LS-SVM regularization")->check(CLI::PositiveNumber);
        c_opt = app->add_option("--c", c, "SVM box constraint")->check(CLI::PositiveNumber);
        standardize_opt = app->add_flag("--standardize", standardize, "z-score features before training");
    }

    /// Explicit flags win over the saved config.
    [[nodiscard]] ClassifierOptions resolve(const RunConfig& rc) const {
        ClassifierOptions o;
        o.kind = classifier_opt->count() > 0 ? classifier_kind_from_string(classifier)
                                             : rc.classifier.value_or(ClassifierKind::lssvm);
        if (sigma_opt->count() > 0) {
            o.sigma = sigma;
        } else {
            o.sigma = rc.sigma;
        }
        o.gamma = gamma_opt->count() > 0 ? gamma : rc.gamma.value_or(1.0);
        o.c = c_opt->count() > 0 ? c : rc.c.value_or(1.0);
        o.standardize = standardize_opt->count() > 0 ? standardize : rc.standardize.value_or(false);
        return o;
    }
};

RunConfig load_run_config(const std::string& path) {
    return path.empty() ? RunConfig{} : parse_run_config(read_text_file(path));
}

Rgb parse_rgb(const std::string& text) {
    const auto fields = split_csv_line(text);
    if (fields.size() != 3) throw InvalidArgument("--neutral needs three comma-separated values");
    Rgb out;
    for (std::size_t i = 0; i < 3; ++i) out[i] = std::stod(fields[i]);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Colorimetric test-strip classification pipeline"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads; outputs do not depend on it")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "render a synthetic strip dataset");
    std::string synth_config;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth->add_option("--config", synth_config, "generator JSON config")->required()->check(CLI::ExistingFile);
    auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "overrides the config seed");
    synth->add_option("--out", synth_out, "output directory")->required();

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "normalize, color correct and crop one strip");
    std::string pre_image, pre_corners, pre_format, pre_neutral, pre_calibration, pre_out;
    double pre_target = 0.5;
    double pre_margin = 0.1;
    pre->add_option("--image", pre_image)->required()->check(CLI::ExistingFile);
    pre->add_option("--corners", pre_corners, "x0,y0,x1,y1,x2,y2,x3,y3 (TL, TR, BR, BL)")->required();
    pre->add_option("--format", pre_format)->check(CLI::IsMember({"jpeg", "raw", "rawc"}));
    pre->add_option("--neutral", pre_neutral, "measured neutral patch r,g,b for white balance");
    pre->add_option("--target", pre_target, "neutral target level");
    pre->add_option("--calibration", pre_calibration, "calibration target file")->check(CLI::ExistingFile);
    pre->add_option("--margin", pre_margin, "inner-crop margin fraction");
    pre->add_option("--out", pre_out, "output directory")->required();

    // extract
    auto* ext = app.add_subcommand("extract", "extract features for every image in a manifest");
    std::string ext_manifest, ext_out;
    double ext_margin = 0.1;
    double ext_panel_margin = 0.15;
    ext->add_option("--manifest", ext_manifest)->required()->check(CLI::ExistingFile);
    ext->add_option("--margin", ext_margin, "inner-crop margin fraction");
    ext->add_option("--panel-margin", ext_panel_margin, "panel trimming fraction");
    ext->add_option("--out", ext_out, "output directory")->required();

    // train
    auto* train = app.add_subcommand("train", "train a one-vs-one classifier");
    std::string train_features, train_out, train_config;
    ClassifierFlags train_flags;
    train->add_option("--features", train_features)->required()->check(CLI::ExistingFile);
    train->add_option("--config", train_config, "config echo of an earlier run")->check(CLI::ExistingFile);
    train_flags.add(train);
    train->add_option("--out", train_out, "output directory")->required();

    // predict
    auto* predict = app.add_subcommand("predict", "classify feature rows or one strip image");
    std::string pred_model, pred_features, pred_image, pred_corners, pred_out;
    predict->add_option("--model", pred_model)->required()->check(CLI::ExistingFile);
    auto* pred_features_opt = predict->add_option("--features", pred_features)->check(CLI::ExistingFile);
    auto* pred_image_opt = predict->add_option("--image", pred_image)->check(CLI::ExistingFile);
    pred_features_opt->excludes(pred_image_opt);
    predict->add_option("--corners", pred_corners, "x0,y0,x1,y1,x2,y2,x3,y3")->needs(pred_image_opt);
    predict->add_option("--out", pred_out, "also write predictions.csv here");

    // crossval
    auto* cv = app.add_subcommand("crossval", "k-fold cross-validation report");
    std::string cv_features, cv_out, cv_config;
    std::size_t cv_k = 10;
    std::uint64_t cv_seed = 0;
    bool cv_unstratified = false;
    ClassifierFlags cv_flags;
    cv->add_option("--features", cv_features)->required()->check(CLI::ExistingFile);
    cv->add_option("--config", cv_config, "config echo of an earlier run")->check(CLI::ExistingFile);
    auto* cv_k_opt = cv->add_option("--k", cv_k, "fold count")
                         ->check(CLI::Validator(
                                     [](std::string& text) -> std::string {
                                         std::size_t value = 0;
                                         const auto [end, ec] =
                                             std::from_chars(text.data(), text.data() + text.size(), value);
                                         const bool ok = ec == std::errc{} && end == text.data() + text.size() &&
                                                         value >= 2;
                                         return ok ? "" : "fold count must be an integer >= 2, got " + text;
                                     },
                                     "INT >= 2"));
    auto* cv_seed_opt = cv->add_option("--seed", cv_seed);
    auto* cv_unstrat_opt = cv->add_flag("--unstratified", cv_unstratified, "plain shuffled folds");
    cv_flags.add(cv);
    cv->add_option("--out", cv_out, "parent of the run directory")->required();

    // dualillum
    auto* dual = app.add_subcommand("dualillum", "train on pure illuminants, test on mixtures");
    std::string dual_train, dual_test, dual_out, dual_config;
    ClassifierFlags dual_flags;
    dual->add_option("--train", dual_train, "training manifest")->required()->check(CLI::ExistingFile);
    dual->add_option("--test", dual_test, "test manifest")->required()->check(CLI::ExistingFile);
    dual->add_option("--config", dual_config, "config echo of an earlier run")->check(CLI::ExistingFile);
    dual_flags.add(dual);
    dual->add_option("--out", dual_out, "output directory")->required();

    // report
    auto* rep = app.add_subcommand("report", "compare crossval runs");
    std::vector<std::string> rep_runs;
    std::string rep_out;
    rep->add_option("--runs", rep_runs, "crossval run directories")->required()->check(CLI::ExistingDirectory);
    rep->add_option("--out", rep_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return 2;
    }

    try {
        if (*synth) {
            SynthArgs a{synth_config, std::nullopt, synth_out, threads};
            if (synth_seed_opt->count() > 0) a.seed = synth_seed;
            const std::size_t rows = cmd_synth(a);
            std::cout << "wrote " << rows << " feature rows to " << synth_out << "\n";
        } else if (*pre) {
            PreprocessArgs a;
            a.image = pre_image;
            a.corners = parse_corners(pre_corners);
            if (!pre_format.empty()) a.format = source_format_from_string(pre_format);
            if (!pre_neutral.empty()) a.neutral = parse_rgb(pre_neutral);
            a.neutral_target = pre_target;
            if (!pre_calibration.empty()) a.calibration = pre_calibration;
            a.inner_margin = pre_margin;
            a.out = pre_out;
            cmd_preprocess(a);
        } else if (*ext) {
            const auto data = cmd_extract({ext_manifest, ext_margin, ext_panel_margin, ext_out, threads});
            std::cout << "wrote " << data.size() << " feature rows to " << ext_out << "\n";
        } else if (*train) {
            const auto model =
                cmd_train({train_features, train_flags.resolve(load_run_config(train_config)), train_out, threads});
            std::cout << "trained " << model.pairs.size() << " pairwise models over " << model.class_count()
                      << " classes\n";
        } else if (*predict) {
            PredictArgs a;
            a.model = pred_model;
            if (pred_features_opt->count() > 0) a.features = pred_features;
            if (pred_image_opt->count() > 0) a.image = pred_image;
            if (!pred_corners.empty()) a.corners = parse_corners(pred_corners);
            if (!pred_out.empty()) a.out = pred_out;
            cmd_predict(a, std::cout);
        } else if (*cv) {
            const RunConfig rc = load_run_config(cv_config);
            CrossvalArgs a;
            a.features = cv_features;
            a.classifier = cv_flags.resolve(rc);
            a.k = cv_k_opt->count() > 0 ? cv_k : rc.k.value_or(10);
            a.seed = cv_seed_opt->count() > 0 ? cv_seed : rc.seed.value_or(0);
            a.stratified = cv_unstrat_opt->count() > 0 ? !cv_unstratified : rc.stratified.value_or(true);
            a.out = cv_out;
            a.threads = threads;
            std::cout << cmd_crossval(a).string() << "\n";
        } else if (*dual) {
            const auto rows = cmd_dualillum(
                {dual_train, dual_test, dual_flags.resolve(load_run_config(dual_config)), dual_out, threads});
            for (const auto& r : rows) std::cout << r.condition << ": " << r.accuracy << "%\n";
        } else if (*rep) {
            ReportArgs a;
            for (const auto& r : rep_runs) a.runs.emplace_back(r);
            a.out = rep_out;
            cmd_report(a);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
