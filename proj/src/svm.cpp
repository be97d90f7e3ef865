// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/svm.hpp"

#include "stripml/error.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace stripml {

namespace {

constexpr double tau = 1e-12;

void check_c(double c) {
    if (!(c > 0.0 && std::isfinite(c))) {
        throw InvalidArgument(fmt::format("SVM box constraint C must be positive and finite, got {}", c));
    }
}

}  // namespace

SvmSolution solve_svm_dual(const BinaryDataset& data, const KernelSpec& kernel, double c, const SmoOptions& options) {
    data.validate();
    kernel.validate();
    check_c(c);
    const Eigen::Index m = static_cast<Eigen::Index>(data.size());
    const Eigen::MatrixXd k = kernel_matrix(kernel, data.inputs);
    const auto& y = data.labels;

    std::vector<double> alpha(static_cast<std::size_t>(m), 0.0);
    std::vector<double> grad(static_cast<std::size_t>(m), -1.0);  // Q alpha - 1
    auto q = [&](Eigen::Index i, Eigen::Index j) { return y[i] * y[j] * k(i, j); };
    auto objective = [&] {
        double value = 0.0;
        for (Eigen::Index t = 0; t < m; ++t) value += 0.5 * alpha[t] - 0.5 * alpha[t] * grad[t];
        return value;
    };
    auto in_up = [&](Eigen::Index t) { return y[t] == 1 ? alpha[t] < c : alpha[t] > 0.0; };
    auto in_low = [&](Eigen::Index t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < c; };

    const long cap = options.max_iterations > 0 ? options.max_iterations : std::max(10'000'000L, 100L * m);
    SvmSolution solution;
    double gap = std::numeric_limits<double>::infinity();
    long iteration = 0;
    for (;; ++iteration) {
        Eigen::Index i = -1;
        Eigen::Index j = -1;
        double up_max = -std::numeric_limits<double>::infinity();
        double low_min = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < m; ++t) {
            const double score = -y[t] * grad[t];
            if (in_up(t) && score > up_max) {
                up_max = score;
                i = t;
            }
            if (in_low(t) && score < low_min) {
                low_min = score;
                j = t;
            }
        }
        gap = up_max - low_min;
        if (i < 0 || j < 0 || gap < options.tolerance) break;
        if (iteration >= cap) {
            throw NumericalError(fmt::format(
                "SMO did not converge within {} iterations (M = {}, C = {}, KKT gap {:.3e} > tolerance {:.0e})", cap,
                m, c, gap, options.tolerance));
        }

        const double old_i = alpha[i];
        const double old_j = alpha[j];
        if (y[i] != y[j]) {
            double quad = k(i, i) + k(j, j) + 2.0 * q(i, j);
            if (quad <= 0.0) quad = tau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = k(i, i) + k(j, j) - 2.0 * q(i, j);
            if (quad <= 0.0) quad = tau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double delta_i = alpha[i] - old_i;
        const double delta_j = alpha[j] - old_j;
        for (Eigen::Index t = 0; t < m; ++t) {
            grad[t] += q(t, i) * delta_i + q(t, j) * delta_j;
        }
        if (options.on_iteration) options.on_iteration(iteration + 1, objective());
    }

    // Bias from free support vectors; midpoint of the feasible range otherwise.
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    long free_count = 0;
    for (Eigen::Index t = 0; t < m; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= c) {
            if (y[t] == -1) {
                upper = std::min(upper, yg);
            } else {
                lower = std::max(lower, yg);
            }
        } else if (alpha[t] <= 0.0) {
            if (y[t] == 1) {
                upper = std::min(upper, yg);
            } else {
                lower = std::max(lower, yg);
            }
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (upper + lower);

    solution.alphas = std::move(alpha);
    solution.bias = -rho;
    solution.iterations = iteration;
    solution.kkt_gap = gap;
    double value = 0.0;
    for (Eigen::Index t = 0; t < m; ++t) value += 0.5 * solution.alphas[t] - 0.5 * solution.alphas[t] * grad[t];
    solution.objective = value;
    return solution;
}

BinaryModel train_svm(const BinaryDataset& data, const KernelSpec& kernel, double c, const SmoOptions& options) {
    const SvmSolution solution = solve_svm_dual(data, kernel, c, options);
    BinaryModel model;
    model.kind = ClassifierKind::svm;
    model.kernel = kernel;
    model.regularization = c;
    model.bias = solution.bias;
    std::vector<Eigen::Index> support;
    for (std::size_t i = 0; i < solution.alphas.size(); ++i) {
        if (solution.alphas[i] > 0.0) support.push_back(static_cast<Eigen::Index>(i));
    }
    model.inputs.resize(static_cast<Eigen::Index>(support.size()), data.inputs.cols());
    for (std::size_t s = 0; s < support.size(); ++s) {
        model.inputs.row(static_cast<Eigen::Index>(s)) = data.inputs.row(support[s]);
        model.alphas.push_back(solution.alphas[static_cast<std::size_t>(support[s])]);
        model.labels.push_back(data.labels[static_cast<std::size_t>(support[s])]);
    }
    return model;
}

double svm_dual_objective(const BinaryDataset& data, const KernelSpec& kernel, const std::vector<double>& alphas) {
    const Eigen::MatrixXd k = kernel_matrix(kernel, data.inputs);
    const Eigen::Index m = k.rows();
    double linear = 0.0;
    double quadratic = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        linear += alphas[i];
        for (Eigen::Index j = 0; j < m; ++j) {
            quadratic += alphas[i] * alphas[j] * data.labels[i] * data.labels[j] * k(i, j);
        }
    }
    return linear - 0.5 * quadratic;
}

}  // namespace stripml
