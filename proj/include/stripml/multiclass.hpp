// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/dataset.hpp"
#include "stripml/lssvm.hpp"
#include "stripml/svm.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stripml {

/// Per-feature affine standardization learned from training data only.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const FeatureRows& inputs);
    [[nodiscard]] FeatureRows apply(const FeatureRows& inputs) const;
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
};

struct TrainerConfig {
    ClassifierKind kind = ClassifierKind::lssvm;
    /// RBF width; the median pairwise training distance when unset.
    std::optional<double> sigma;
    double gamma = 1.0;  ///< LS-SVM regularization
    double c = 1.0;      ///< SVM box constraint
    bool standardize = false;
    double smo_tolerance = 1e-3;
    /// Workers for independent pairwise trainings.
    int threads = 1;
};

struct PairwiseModel {
    int first = 0;   ///< class trained as +1
    int second = 0;  ///< class trained as -1
    BinaryModel model;
};

/// One-vs-one ensemble: one binary model per unordered class pair, ordered
/// (0,1), (0,2), ..., (K-2,K-1).
struct MultiClassModel {
    ClassifierKind kind = ClassifierKind::lssvm;
    std::vector<std::string> class_labels;
    std::vector<PairwiseModel> pairs;
    std::optional<Standardizer> standardizer;
    Eigen::Index dims = 0;

    [[nodiscard]] int class_count() const noexcept { return static_cast<int>(class_labels.size()); }
};

/// Vote tally for one input.
struct Prediction {
    int label = 0;
    std::vector<int> votes;
    /// Sum of |decision value| over the duels each class won.
    std::vector<double> margins;
};

/// Trains one binary model per class pair on that pair's samples only; the
/// lower class index is the +1 side.
MultiClassModel train_multiclass(const LabeledDataset& data, const TrainerConfig& config = {});

/// Kernel width that training with `config` would use on `data`.
double resolve_sigma(const LabeledDataset& data, const TrainerConfig& config);

/// Decision value of every pairwise model, in `pairs` order.
std::vector<double> pairwise_decisions(const MultiClassModel& model, std::span<const double> x);

/// Majority vote. Ties go to the larger summed margin, then the lower class index.
Prediction vote(const MultiClassModel& model, std::span<const double> decisions);

Prediction predict_multiclass(const MultiClassModel& model, std::span<const double> x);

/// Per-class score for one-vs-rest ranking: the smallest decision value among
/// the class's duels, oriented toward that class. A class that wins every duel
/// scores >= 0 and a class that loses any duel scores <= 0.
std::vector<double> class_scores(const MultiClassModel& model, std::span<const double> decisions);

}  // namespace stripml
