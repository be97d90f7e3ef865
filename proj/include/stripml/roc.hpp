// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/dataset.hpp"
#include "stripml/multiclass.hpp"

#include <span>
#include <vector>

namespace stripml {

struct RocPoint {
    double false_positive_rate = 0.0;  ///< 1 - specificity
    double true_positive_rate = 0.0;   ///< sensitivity
};

/// Threshold sweep from (0, 0) to (1, 1); both coordinates non-decreasing.
struct RocCurve {
    std::vector<RocPoint> points;
};

/// Sweeps the threshold down through every distinct score. Labels are +1/-1
/// and both must occur; tied scores move the curve diagonally.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

/// Micro-averaged one-vs-rest curve: every (score of class c, truth == c)
/// pair is pooled into one binary problem. With two classes the two
/// one-vs-rest problems mirror each other, so only class 0's is used.
/// `scores` holds one row of per-class scores per sample.
RocCurve micro_average_roc(const std::vector<std::vector<double>>& scores, std::span<const int> truth);

/// Scores every sample of `data` with `model` (see class_scores) and pools
/// them through micro_average_roc.
RocCurve multiclass_roc(const MultiClassModel& model, const LabeledDataset& data);

}  // namespace stripml
