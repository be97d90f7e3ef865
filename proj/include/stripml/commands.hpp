// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/crossval.hpp"
#include "stripml/geometry.hpp"
#include "stripml/image.hpp"
#include "stripml/lssvm.hpp"
#include "stripml/multiclass.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stripml {

/// Classifier settings shared by train, crossval and dualillum.
struct ClassifierOptions {
    ClassifierKind kind = ClassifierKind::lssvm;
    std::optional<double> sigma;
    double gamma = 1.0;
    double c = 1.0;
    bool standardize = false;

    [[nodiscard]] TrainerConfig trainer(int threads) const;
};

struct SynthArgs {
    std::filesystem::path config;
    /// Replaces the seed in the config file.
    std::optional<std::uint64_t> seed;
    std::filesystem::path out;
    int threads = 1;
};

/// Writes features.csv, manifest.csv, synth_config.json and, when the config
/// asks for it, images/. Returns the number of rows.
std::size_t cmd_synth(const SynthArgs& args);

struct PreprocessArgs {
    std::filesystem::path image;
    Quad corners;
    std::optional<SourceFormat> format;
    /// Measured neutral patch for white balance.
    std::optional<Rgb> neutral;
    double neutral_target = 0.5;
    /// Calibration target used to fit a color matrix; requires linear input.
    std::optional<std::filesystem::path> calibration;
    double inner_margin = default_inner_margin;
    std::filesystem::path out;
};

/// Writes strip.png (16 bit) and preprocess_config.json.
StripImage cmd_preprocess(const PreprocessArgs& args);

struct ExtractArgs {
    std::filesystem::path manifest;
    double inner_margin = default_inner_margin;
    double panel_margin = 0.15;
    std::filesystem::path out;
    int threads = 1;
};

/// Re-extracts features from the images listed in a manifest; writes
/// features.csv and extract_config.json.
LabeledDataset cmd_extract(const ExtractArgs& args);

struct TrainArgs {
    std::filesystem::path features;
    ClassifierOptions classifier;
    std::filesystem::path out;
    int threads = 1;
};

/// Writes model.json, train_summary.txt and train_config.json.
MultiClassModel cmd_train(const TrainArgs& args);

struct PredictArgs {
    std::filesystem::path model;
    std::optional<std::filesystem::path> features;
    std::optional<std::filesystem::path> image;
    std::optional<Quad> corners;
    double inner_margin = default_inner_margin;
    double panel_margin = 0.15;
    std::optional<std::filesystem::path> out;
};

struct PredictionRecord {
    std::string truth;  ///< empty for image input
    std::string predicted;
    Prediction detail;
};

/// Prints one CSV row per input to `sink`; writes predictions.csv and
/// predict_config.json when `out` is set.
std::vector<PredictionRecord> cmd_predict(const PredictArgs& args, std::ostream& sink);

struct CrossvalArgs {
    std::filesystem::path features;
    ClassifierOptions classifier;
    std::size_t k = 10;
    std::uint64_t seed = 0;
    bool stratified = true;
    std::filesystem::path out;
    int threads = 1;
};

/// Creates `<out>/<config hash>-seed<seed>/` holding config.json,
/// per_class.csv, predictions.csv, roc.csv, roc.svg and summary.txt.
/// Returns the run directory.
std::filesystem::path cmd_crossval(const CrossvalArgs& args);

struct DualIllumArgs {
    std::filesystem::path train_manifest;
    std::filesystem::path test_manifest;
    ClassifierOptions classifier;
    std::filesystem::path out;
    int threads = 1;
};

struct ConditionAccuracy {
    std::string condition;
    std::size_t samples = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
};

/// Trains on the training manifest's features and scores each illuminant
/// condition of the test manifest. Features come from the features.csv next
/// to each manifest. Writes dualillum.csv and dualillum_config.json.
std::vector<ConditionAccuracy> cmd_dualillum(const DualIllumArgs& args);

/// Accuracy of `model` on `test`, grouped by `conditions[i]` in order of
/// first appearance.
std::vector<ConditionAccuracy> condition_accuracy(const MultiClassModel& model, const LabeledDataset& test,
                                                  const std::vector<std::string>& conditions);

struct ReportArgs {
    std::vector<std::filesystem::path> runs;
    std::filesystem::path out;
};

/// Merges crossval run directories into comparison.csv, roc.csv, roc.svg,
/// summary.txt and report_config.json.
void cmd_report(const ReportArgs& args);

/// Settings recovered from a config echo; unset keys stay empty.
struct RunConfig {
    std::optional<ClassifierKind> classifier;
    std::optional<double> sigma;
    std::optional<double> gamma;
    std::optional<double> c;
    std::optional<bool> standardize;
    std::optional<std::size_t> k;
    std::optional<std::uint64_t> seed;
    std::optional<bool> stratified;
};

RunConfig parse_run_config(const std::string& json_text);

std::string read_text_file(const std::filesystem::path& path);

/// Parses "x0,y0,x1,y1,x2,y2,x3,y3".
Quad parse_corners(const std::string& text);

}  // namespace stripml
