// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/crossval.hpp"

#include "stripml/error.hpp"
#include "stripml/parallel.hpp"

#include <fmt/core.h>

#include <cmath>
#include <limits>

namespace stripml {

std::vector<double> GridSearch::log_space(double lo, double hi, std::size_t count) {
    std::vector<double> out;
    if (count == 1) return {std::pow(10.0, lo)};
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1)));
    }
    return out;
}

namespace {

struct CompactDataset {
    LabeledDataset data;
    std::vector<int> original_class;  ///< compact index -> original index
};

CompactDataset drop_empty_classes(const LabeledDataset& data) {
    CompactDataset out;
    const auto counts = data.class_counts();
    std::vector<int> remap(counts.size(), -1);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) {
            remap[c] = static_cast<int>(out.original_class.size());
            out.original_class.push_back(static_cast<int>(c));
            out.data.class_names.push_back(data.class_names[c]);
        }
    }
    out.data.inputs = data.inputs;
    out.data.labels.reserve(data.size());
    for (int y : data.labels) out.data.labels.push_back(remap[static_cast<std::size_t>(y)]);
    return out;
}

bool can_stratify(const LabeledDataset& data, std::size_t k) {
    for (std::size_t count : data.class_counts()) {
        if (count > 0 && count < k) return false;
    }
    return true;
}

}  // namespace

TrainerConfig select_hyperparameters(const LabeledDataset& data, const TrainerConfig& config, const GridSearch& grid) {
    if (grid.sigmas.empty() || grid.regularizations.empty()) {
        throw InvalidArgument("hyperparameter grid must list at least one sigma and one regularization value");
    }
    TrainerConfig best = config;
    double best_accuracy = -1.0;
    CrossValidationOptions inner;
    inner.k = std::min(grid.inner_folds, data.size());
    inner.seed = grid.seed;
    inner.threads = 1;
    for (double sigma : grid.sigmas) {
        for (double reg : grid.regularizations) {
            TrainerConfig candidate = config;
            candidate.sigma = sigma;
            (candidate.kind == ClassifierKind::lssvm ? candidate.gamma : candidate.c) = reg;
            candidate.threads = 1;
            double acc = -1.0;
            try {
                acc = cross_validate(data, model_trainer(candidate), inner).overall_accuracy;
            } catch (const NumericalError&) {
                continue;  // grid point not trainable on these folds
            }
            if (acc > best_accuracy) {
                best_accuracy = acc;
                best = candidate;
                best.threads = config.threads;
            }
        }
    }
    if (best_accuracy < 0.0) {
        throw NumericalError("no grid point could be trained");
    }
    return best;
}

MultiClassModel fit_model(const LabeledDataset& data, const TrainerConfig& config,
                          const std::optional<GridSearch>& grid) {
    const CompactDataset compact = drop_empty_classes(data);
    const TrainerConfig resolved = grid ? select_hyperparameters(compact.data, config, *grid) : config;
    return train_multiclass(compact.data, resolved);
}

FoldTrainer model_trainer(const TrainerConfig& config, std::optional<GridSearch> grid) {
    return [config, grid](const LabeledDataset& training) -> FoldPredictor {
        const CompactDataset compact = drop_empty_classes(training);
        const TrainerConfig resolved = grid ? select_hyperparameters(compact.data, config, *grid) : config;
        auto model = std::make_shared<const MultiClassModel>(train_multiclass(compact.data, resolved));
        const std::size_t full_classes = training.class_names.size();
        return [model, mapping = compact.original_class, full_classes](std::span<const double> x) {
            const auto decisions = pairwise_decisions(*model, x);
            const Prediction p = vote(*model, decisions);
            const auto compact_scores = class_scores(*model, decisions);
            ScoredPrediction out;
            out.label = mapping[static_cast<std::size_t>(p.label)];
            out.scores.assign(full_classes, -std::numeric_limits<double>::infinity());
            for (std::size_t c = 0; c < compact_scores.size(); ++c) {
                out.scores[static_cast<std::size_t>(mapping[c])] = compact_scores[c];
            }
            return out;
        };
    };
}

void summarize_predictions(const std::vector<std::string>& class_names, std::span<const int> truth,
                           CrossValidationResult& result) {
    const auto k = static_cast<int>(class_names.size());
    result.classes.clear();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += result.predictions[i] == truth[i] ? 1 : 0;
    result.overall_accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(truth.size());
    for (int c = 0; c < k; ++c) {
        ClassReport row;
        row.name = class_names[static_cast<std::size_t>(c)];
        row.counts = one_vs_rest_counts(truth, result.predictions, c);
        row.samples = static_cast<std::size_t>(row.counts.true_positive + row.counts.false_negative);
        row.accuracy = accuracy(row.counts);
        const auto nan = std::numeric_limits<double>::quiet_NaN();
        row.sensitivity = row.samples > 0 ? sensitivity(row.counts) : nan;
        row.specificity = row.counts.true_negative + row.counts.false_positive > 0 ? specificity(row.counts) : nan;
        result.classes.push_back(std::move(row));
    }
    result.roc = micro_average_roc(result.scores, truth);
    result.auc = auc(result.roc);
}

CrossValidationResult cross_validate(const LabeledDataset& data, const FoldTrainer& trainer,
                                     const CrossValidationOptions& options) {
    data.validate();
    if (data.class_count() < 2) {
        throw InvalidArgument("cross-validation needs at least two classes");
    }
    const bool stratify = options.stratified && can_stratify(data, options.k);
    CrossValidationResult result;
    result.plan = k_fold_split(data.size(), options.k, data.labels, options.seed, stratify);
    result.predictions.assign(data.size(), -1);
    result.scores.assign(data.size(), {});
    result.fold_of.assign(data.size(), 0);

    parallel_for(result.plan.k(), options.threads, [&](std::size_t f) {
        const auto& held_out = result.plan.folds[f];
        const auto train_idx = result.plan.training_indices(f);
        try {
            const FoldPredictor predict = trainer(data.subset(train_idx));
            for (std::size_t i : held_out) {
                ScoredPrediction p = predict(row_span(data.inputs, static_cast<Eigen::Index>(i)));
                if (p.scores.size() != static_cast<std::size_t>(data.class_count())) {
                    throw InvalidArgument(fmt::format("predictor returned {} class scores, expected {}",
                                                      p.scores.size(), data.class_count()));
                }
                result.predictions[i] = p.label;
                result.scores[i] = std::move(p.scores);
                result.fold_of[i] = f;
            }
        } catch (const NumericalError& e) {
            throw NumericalError(fmt::format("fold {}: {}", f + 1, e.what()));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(fmt::format("fold {}: {}", f + 1, e.what()));
        }
    });
    summarize_predictions(data.class_names, data.labels, result);
    return result;
}

CrossValidationResult cross_validate(const LabeledDataset& data, const TrainerConfig& config,
                                     const CrossValidationOptions& options, const std::optional<GridSearch>& grid) {
    return cross_validate(data, model_trainer(config, grid), options);
}

}  // namespace stripml
