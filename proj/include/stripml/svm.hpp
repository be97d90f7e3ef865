// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/dataset.hpp"
#include "stripml/kernel.hpp"
#include "stripml/lssvm.hpp"

#include <functional>
#include <vector>

namespace stripml {

using BinarySvmModel = BinaryModel;

struct SmoOptions {
    /// Stop once the maximal KKT violation m(alpha) - M(alpha) drops below this.
    double tolerance = 1e-3;
    /// 0 selects max(10^7, 100 M).
    long max_iterations = 0;
    /// Called after every pair update with the dual objective.
    std::function<void(long iteration, double objective)> on_iteration;
};

/// Full dual solution over every training point.
struct SvmSolution {
    std::vector<double> alphas;
    double bias = 0.0;
    long iterations = 0;
    double objective = 0.0;
    double kkt_gap = 0.0;
};

/// Maximizes sum(alpha) - 1/2 alpha^T Q alpha subject to 0 <= alpha_i <= C and
/// y^T alpha = 0 (Q_ij = y_i y_j k(x_i, x_j)) with two-variable SMO and
/// maximal-violating-pair selection. The bias is the average over free
/// support vectors, or the midpoint of the feasible interval when none is free.
SvmSolution solve_svm_dual(const BinaryDataset& data, const KernelSpec& kernel, double c,
                           const SmoOptions& options = {});

/// Trains the soft-margin SVM and keeps only the support vectors (alpha > 0).
BinaryModel train_svm(const BinaryDataset& data, const KernelSpec& kernel, double c = 1.0,
                      const SmoOptions& options = {});

/// sum(alpha) - 1/2 alpha^T Q alpha for an arbitrary alpha.
double svm_dual_objective(const BinaryDataset& data, const KernelSpec& kernel, const std::vector<double>& alphas);

}  // namespace stripml
