// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/dataset.hpp"
#include "stripml/folds.hpp"
#include "stripml/metrics.hpp"
#include "stripml/multiclass.hpp"
#include "stripml/roc.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stripml {

/// Prediction for one held-out sample; `scores` has one entry per class of
/// the dataset being cross-validated.
struct ScoredPrediction {
    int label = 0;
    std::vector<double> scores;
};

using FoldPredictor = std::function<ScoredPrediction(std::span<const double>)>;
/// Builds a predictor from a training fold. The fold keeps the full class
/// list even when some classes have no samples in it.
using FoldTrainer = std::function<FoldPredictor(const LabeledDataset& training)>;

/// Log-spaced hyperparameter grid scored by inner cross-validation accuracy.
struct GridSearch {
    std::vector<double> sigmas;
    /// gamma for the LS-SVM, C for the SVM.
    std::vector<double> regularizations;
    std::size_t inner_folds = 3;
    std::uint64_t seed = 0;

    /// `count` values from 10^lo to 10^hi inclusive.
    static std::vector<double> log_space(double lo, double hi, std::size_t count);
};

/// Returns `config` with sigma and the regularization set to the grid point
/// with the best inner-CV accuracy on `data` (first point wins ties).
TrainerConfig select_hyperparameters(const LabeledDataset& data, const TrainerConfig& config, const GridSearch& grid);

/// Trains on `data`, running the grid search first when one is given. Classes
/// absent from `data` are dropped before training.
MultiClassModel fit_model(const LabeledDataset& data, const TrainerConfig& config,
                          const std::optional<GridSearch>& grid = std::nullopt);

/// Trainer backed by fit_model. Class scores follow class_scores; classes
/// missing from a training fold score -infinity.
FoldTrainer model_trainer(const TrainerConfig& config, std::optional<GridSearch> grid = std::nullopt);

struct CrossValidationOptions {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    /// Falls back to a plain shuffle when some class has fewer than k samples.
    bool stratified = true;
    int threads = 1;
};

struct ClassReport {
    std::string name;
    std::size_t samples = 0;
    ConfusionCounts counts;  ///< one-vs-rest
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
};

struct CrossValidationResult {
    FoldPlan plan;
    std::vector<int> predictions;
    std::vector<std::vector<double>> scores;
    std::vector<std::size_t> fold_of;
    std::vector<ClassReport> classes;
    double overall_accuracy = 0.0;
    RocCurve roc;
    double auc = 0.0;
};

/// k-fold cross-validation: every sample is predicted exactly once by a model
/// trained on the other folds. Per-class rows use one-vs-rest counts; the
/// overall accuracy is the fraction of correct predictions.
CrossValidationResult cross_validate(const LabeledDataset& data, const FoldTrainer& trainer,
                                     const CrossValidationOptions& options);
CrossValidationResult cross_validate(const LabeledDataset& data, const TrainerConfig& config,
                                     const CrossValidationOptions& options,
                                     const std::optional<GridSearch>& grid = std::nullopt);

/// Per-class one-vs-rest rows, overall accuracy and pooled ROC for a set of
/// predictions against `truth` (indices into `class_names`).
void summarize_predictions(const std::vector<std::string>& class_names, std::span<const int> truth,
                           CrossValidationResult& result);

}  // namespace stripml
