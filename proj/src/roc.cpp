// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/roc.hpp"

#include "stripml/error.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stripml {

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw InvalidArgument(fmt::format("{} scores but {} labels", scores.size(), labels.size()));
    }
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
    for (int y : labels) {
        if (y == 1) {
            ++positives;
        } else if (y == -1) {
            ++negatives;
        } else {
            throw InvalidArgument(fmt::format("ROC label {} is not +1 or -1", y));
        }
    }
    if (positives == 0 || negatives == 0) {
        throw InvalidArgument("ROC curve needs at least one positive and one negative label");
    }
    for (double s : scores) {
        if (std::isnan(s)) throw InvalidArgument("ROC scores contain NaN");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == threshold; ++i) {
            (labels[order[i]] == 1 ? tp : fp) += 1;
        }
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                                static_cast<double>(tp) / static_cast<double>(positives)});
    }
    return curve;
}

double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.false_positive_rate - a.false_positive_rate) * (a.true_positive_rate + b.true_positive_rate) * 0.5;
    }
    return area;
}

RocCurve micro_average_roc(const std::vector<std::vector<double>>& scores, std::span<const int> truth) {
    if (scores.empty()) throw InvalidArgument("ROC needs at least one sample");
    if (scores.size() != truth.size()) {
        throw InvalidArgument(fmt::format("{} score rows but {} labels", scores.size(), truth.size()));
    }
    const std::size_t k = scores.front().size();
    for (const auto& row : scores) {
        if (row.size() != k) throw InvalidArgument("score rows differ in class count");
    }
    const std::size_t pooled_classes = k == 2 ? 1 : k;
    std::vector<double> pooled;
    std::vector<int> labels;
    pooled.reserve(scores.size() * pooled_classes);
    labels.reserve(scores.size() * pooled_classes);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        for (std::size_t c = 0; c < pooled_classes; ++c) {
            pooled.push_back(scores[i][c]);
            labels.push_back(truth[i] == static_cast<int>(c) ? 1 : -1);
        }
    }
    return roc_curve(pooled, labels);
}

RocCurve multiclass_roc(const MultiClassModel& model, const LabeledDataset& data) {
    data.validate();
    if (data.size() == 0) throw InvalidArgument("ROC needs at least one sample");
    // Truth is expressed in the model's class order.
    std::vector<int> truth;
    truth.reserve(data.size());
    for (int y : data.labels) {
        const auto& name = data.class_names[static_cast<std::size_t>(y)];
        const auto it = std::find(model.class_labels.begin(), model.class_labels.end(), name);
        if (it == model.class_labels.end()) {
            throw InvalidArgument(fmt::format("class '{}' is unknown to the model", name));
        }
        truth.push_back(static_cast<int>(it - model.class_labels.begin()));
    }
    std::vector<std::vector<double>> scores;
    scores.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto decisions = pairwise_decisions(model, row_span(data.inputs, static_cast<Eigen::Index>(i)));
        scores.push_back(class_scores(model, decisions));
    }
    return micro_average_roc(scores, truth);
}

}  // namespace stripml
