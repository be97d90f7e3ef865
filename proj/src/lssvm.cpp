// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/lssvm.hpp"

#include "stripml/error.hpp"

#include <Eigen/Cholesky>
#include <fmt/core.h>

#include <cmath>

namespace stripml {

const char* to_string(ClassifierKind kind) noexcept { return kind == ClassifierKind::lssvm ? "lssvm" : "svm"; }

ClassifierKind classifier_kind_from_string(const std::string& name) {
    if (name == "lssvm" || name == "ls-svm") return ClassifierKind::lssvm;
    if (name == "svm") return ClassifierKind::svm;
    throw InvalidArgument(fmt::format("unknown classifier '{}' (expected lssvm or svm)", name));
}

namespace {

constexpr double residual_limit = 1e-8;

Eigen::VectorXd label_vector(const std::vector<int>& labels) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) y[static_cast<Eigen::Index>(i)] = labels[i];
    return y;
}

// Omega + I/gamma
Eigen::MatrixXd regularized_omega(const BinaryModel& model) {
    const Eigen::VectorXd y = label_vector(model.labels);
    Eigen::MatrixXd h = kernel_matrix(model.kernel, model.inputs);
    h = y.asDiagonal() * h * y.asDiagonal();
    h.diagonal().array() += 1.0 / model.regularization;
    return h;
}

}  // namespace

BinaryModel train_binary(const BinaryDataset& data, const KernelSpec& kernel, double gamma) {
    data.validate();
    kernel.validate();
    if (!(gamma > 0.0 && std::isfinite(gamma))) {
        throw InvalidArgument(fmt::format("LS-SVM gamma must be positive and finite, got {}", gamma));
    }
    BinaryModel model;
    model.kind = ClassifierKind::lssvm;
    model.kernel = kernel;
    model.regularization = gamma;
    model.inputs = data.inputs;
    model.labels = data.labels;

    const Eigen::MatrixXd h = regularized_omega(model);
    const Eigen::LLT<Eigen::MatrixXd> chol(h);
    if (chol.info() != Eigen::Success) {
        throw NumericalError(fmt::format(
            "LS-SVM system (M = {}, gamma = {}) is not positive definite; the data may contain duplicated points "
            "with conflicting labels at a gamma too large to resolve",
            data.size(), gamma));
    }
    const Eigen::VectorXd y = label_vector(data.labels);
    const Eigen::VectorXd eta = chol.solve(y);
    const Eigen::VectorXd nu = chol.solve(Eigen::VectorXd::Ones(y.size()));
    const double schur = y.dot(eta);
    if (!(schur > 0.0) || !std::isfinite(schur)) {
        throw NumericalError(fmt::format("LS-SVM Schur complement is degenerate ({})", schur));
    }
    model.bias = y.dot(nu) / schur;
    const Eigen::VectorXd alpha = nu - eta * model.bias;
    model.alphas.assign(alpha.data(), alpha.data() + alpha.size());

    const double residual = lssvm_relative_residual(model);
    if (!(residual <= residual_limit)) {
        throw NumericalError(fmt::format("LS-SVM KKT relative residual {:.3e} exceeds {:.0e} (M = {}, gamma = {})",
                                         residual, residual_limit, data.size(), gamma));
    }
    return model;
}

double lssvm_relative_residual(const BinaryModel& model) {
    const Eigen::Index m = static_cast<Eigen::Index>(model.labels.size());
    const Eigen::VectorXd y = label_vector(model.labels);
    const Eigen::Map<const Eigen::VectorXd> alpha(model.alphas.data(), m);
    const Eigen::MatrixXd h = regularized_omega(model);
    // First row: y^T alpha = 0. Remaining rows: y b + H alpha = 1.
    Eigen::VectorXd residual(m + 1);
    residual[0] = y.dot(alpha);
    residual.tail(m) = y * model.bias + h * alpha - Eigen::VectorXd::Ones(m);
    return residual.norm() / std::sqrt(static_cast<double>(m));
}

double decision_value(const BinaryModel& model, std::span<const double> x) {
    if (static_cast<Eigen::Index>(x.size()) != model.dims()) {
        throw InvalidArgument(
            fmt::format("input has dimension {}, model expects {}", x.size(), model.dims()));
    }
    double sum = model.bias;
    for (std::size_t i = 0; i < model.alphas.size(); ++i) {
        sum += model.alphas[i] * model.labels[i] *
               kernel_value(model.kernel, x, row_span(model.inputs, static_cast<Eigen::Index>(i)));
    }
    return sum;
}

int predict_binary(const BinaryModel& model, std::span<const double> x) {
    return sign_of(decision_value(model, x));
}

}  // namespace stripml
