// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/dataset.hpp"

#include <Eigen/Core>

#include <span>
#include <string>

namespace stripml {

/// The linear kind exists for tests; production models use RBF.
enum class KernelKind { rbf, linear };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double sigma = 1.0;  ///< RBF width

    void validate() const;
};

const char* to_string(KernelKind kind) noexcept;
KernelKind kernel_kind_from_string(const std::string& name);

/// exp(-||x - x2||^2 / (2 sigma^2)).
double rbf_kernel(std::span<const double> x, std::span<const double> x2, double sigma);

/// Evaluates `spec` without argument checks; callers validate dimensions once.
double kernel_value(const KernelSpec& spec, std::span<const double> x, std::span<const double> x2) noexcept;

/// Symmetric Gram matrix over the rows of `inputs`.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const FeatureRows& inputs);

/// Median Euclidean distance over all unordered pairs of distinct rows
/// (pairs at distance zero included). Needs at least two rows.
double median_pairwise_distance(const FeatureRows& inputs);

}  // namespace stripml
