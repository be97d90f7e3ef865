// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/multiclass.hpp"

#include "stripml/error.hpp"
#include "stripml/parallel.hpp"

#include <fmt/core.h>

#include <cmath>
#include <limits>

namespace stripml {

Standardizer Standardizer::fit(const FeatureRows& inputs) {
    Standardizer s;
    const Eigen::Index m = inputs.rows();
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
        const double mean = inputs.col(j).mean();
        const double var = m > 1 ? (inputs.col(j).array() - mean).square().sum() / static_cast<double>(m - 1) : 0.0;
        s.mean.push_back(mean);
        // Constant features pass through unscaled.
        s.scale.push_back(var > 0.0 ? std::sqrt(var) : 1.0);
    }
    return s;
}

FeatureRows Standardizer::apply(const FeatureRows& inputs) const {
    FeatureRows out(inputs.rows(), inputs.cols());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
            out(i, j) = (inputs(i, j) - mean[static_cast<std::size_t>(j)]) / scale[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
    return out;
}

namespace {

void check_config(const TrainerConfig& config) {
    if (config.sigma && !(*config.sigma > 0.0)) {
        throw InvalidArgument(fmt::format("sigma must be positive, got {}", *config.sigma));
    }
    if (config.kind == ClassifierKind::lssvm && !(config.gamma > 0.0)) {
        throw InvalidArgument(fmt::format("gamma must be positive, got {}", config.gamma));
    }
    if (config.kind == ClassifierKind::svm && !(config.c > 0.0)) {
        throw InvalidArgument(fmt::format("C must be positive, got {}", config.c));
    }
}

double sigma_for(const FeatureRows& inputs, const TrainerConfig& config) {
    if (config.sigma) return *config.sigma;
    const double median = median_pairwise_distance(inputs);
    if (!(median > 0.0)) {
        throw InvalidArgument("median pairwise distance is zero; pass an explicit sigma");
    }
    return median;
}

}  // namespace

double resolve_sigma(const LabeledDataset& data, const TrainerConfig& config) {
    if (config.sigma) return *config.sigma;
    if (config.standardize) return sigma_for(Standardizer::fit(data.inputs).apply(data.inputs), config);
    return sigma_for(data.inputs, config);
}

MultiClassModel train_multiclass(const LabeledDataset& data, const TrainerConfig& config) {
    data.validate();
    check_config(config);
    const int k = data.class_count();
    if (k < 2) {
        throw InvalidArgument(fmt::format("multi-class training needs at least 2 classes, got {}", k));
    }
    const auto counts = data.class_counts();
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            throw InvalidArgument(fmt::format("class '{}' has no training samples", data.class_names[c]));
        }
    }

    MultiClassModel model;
    model.kind = config.kind;
    model.class_labels = data.class_names;
    model.dims = data.dims();
    FeatureRows inputs = data.inputs;
    if (config.standardize) {
        model.standardizer = Standardizer::fit(inputs);
        inputs = model.standardizer->apply(inputs);
    }
    const KernelSpec kernel{KernelKind::rbf, sigma_for(inputs, config)};

    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) model.pairs.push_back({a, b, {}});
    }
    parallel_for(model.pairs.size(), config.threads, [&](std::size_t p) {
        PairwiseModel& pair = model.pairs[p];
        BinaryDataset binary;
        std::vector<Eigen::Index> rows;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data.labels[i] == pair.first || data.labels[i] == pair.second) {
                rows.push_back(static_cast<Eigen::Index>(i));
                binary.labels.push_back(data.labels[i] == pair.first ? 1 : -1);
            }
        }
        binary.inputs.resize(static_cast<Eigen::Index>(rows.size()), inputs.cols());
        for (std::size_t r = 0; r < rows.size(); ++r) binary.inputs.row(static_cast<Eigen::Index>(r)) = inputs.row(rows[r]);
        try {
            if (config.kind == ClassifierKind::lssvm) {
                pair.model = train_binary(binary, kernel, config.gamma);
            } else {
                SmoOptions smo;
                smo.tolerance = config.smo_tolerance;
                pair.model = train_svm(binary, kernel, config.c, smo);
            }
        } catch (const Error& e) {
            throw NumericalError(fmt::format("class pair ({}, {}): {}", data.class_names[pair.first],
                                             data.class_names[pair.second], e.what()));
        }
    });
    return model;
}

std::vector<double> pairwise_decisions(const MultiClassModel& model, std::span<const double> x) {
    if (static_cast<Eigen::Index>(x.size()) != model.dims) {
        throw InvalidArgument(fmt::format("input has dimension {}, model expects {}", x.size(), model.dims));
    }
    std::vector<double> scaled;
    if (model.standardizer) {
        scaled = model.standardizer->apply(x);
        x = scaled;
    }
    std::vector<double> out;
    out.reserve(model.pairs.size());
    for (const auto& pair : model.pairs) out.push_back(decision_value(pair.model, x));
    return out;
}

Prediction vote(const MultiClassModel& model, std::span<const double> decisions) {
    const int k = model.class_count();
    Prediction p;
    p.votes.assign(static_cast<std::size_t>(k), 0);
    p.margins.assign(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < model.pairs.size(); ++i) {
        const double d = decisions[i];
        const int winner = sign_of(d) > 0 ? model.pairs[i].first : model.pairs[i].second;
        p.votes[static_cast<std::size_t>(winner)] += 1;
        p.margins[static_cast<std::size_t>(winner)] += std::abs(d);
    }
    p.label = 0;
    for (int c = 1; c < k; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        const auto best = static_cast<std::size_t>(p.label);
        if (p.votes[cu] > p.votes[best] || (p.votes[cu] == p.votes[best] && p.margins[cu] > p.margins[best])) {
            p.label = c;
        }
    }
    return p;
}

Prediction predict_multiclass(const MultiClassModel& model, std::span<const double> x) {
    const auto decisions = pairwise_decisions(model, x);
    return vote(model, decisions);
}

std::vector<double> class_scores(const MultiClassModel& model, std::span<const double> decisions) {
    std::vector<double> scores(static_cast<std::size_t>(model.class_count()), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < model.pairs.size(); ++i) {
        auto& first = scores[static_cast<std::size_t>(model.pairs[i].first)];
        auto& second = scores[static_cast<std::size_t>(model.pairs[i].second)];
        first = std::min(first, decisions[i]);
        second = std::min(second, -decisions[i]);
    }
    return scores;
}

}  // namespace stripml
