// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/dataset.hpp"
#include "stripml/kernel.hpp"

#include <span>
#include <string>
#include <vector>

namespace stripml {

enum class ClassifierKind { lssvm, svm };

const char* to_string(ClassifierKind kind) noexcept;
ClassifierKind classifier_kind_from_string(const std::string& name);

/// Kernel expansion f(x) = sum_i alpha_i y_i k(x, x_i) + b shared by the
/// LS-SVM and the SVM baseline. `regularization` is gamma for the LS-SVM
/// (weight on the squared slack) and the box constraint C for the SVM.
struct BinaryModel {
    ClassifierKind kind = ClassifierKind::lssvm;
    KernelSpec kernel;
    double regularization = 1.0;
    std::vector<double> alphas;
    double bias = 0.0;
    FeatureRows inputs;
    std::vector<int> labels;

    [[nodiscard]] Eigen::Index dims() const noexcept { return inputs.cols(); }
};

using BinaryLsSvmModel = BinaryModel;

/// Trains an LS-SVM by solving the bordered KKT system
///
///   [ 0   y^T            ] [b]   [0]
///   [ y   Omega + I/gamma ] [a] = [1],   Omega_ij = y_i y_j k(x_i, x_j).
///
/// Omega + I/gamma is factored with Cholesky and the border eliminated through
/// its Schur complement. Throws NumericalError if the factorization fails or
/// the relative residual of the full system exceeds 1e-8.
BinaryModel train_binary(const BinaryDataset& data, const KernelSpec& kernel, double gamma = 1.0);

/// ||A z - r|| / ||r|| for the KKT system reconstructed from the model.
double lssvm_relative_residual(const BinaryModel& model);

/// sum_i alpha_i y_i k(x, x_i) + b.
double decision_value(const BinaryModel& model, std::span<const double> x);

/// Sign of the decision value; zero maps to +1.
int predict_binary(const BinaryModel& model, std::span<const double> x);

inline int sign_of(double value) noexcept { return value >= 0.0 ? 1 : -1; }

}  // namespace stripml
