// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/kernel.hpp"

#include "stripml/error.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace stripml {

void KernelSpec::validate() const {
    if (kind == KernelKind::rbf && !(sigma > 0.0 && std::isfinite(sigma))) {
        throw InvalidArgument(fmt::format("RBF sigma must be positive and finite, got {}", sigma));
    }
}

const char* to_string(KernelKind kind) noexcept { return kind == KernelKind::rbf ? "rbf" : "linear"; }

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "rbf") return KernelKind::rbf;
    if (name == "linear") return KernelKind::linear;
    throw FormatError(fmt::format("unknown kernel kind '{}'", name));
}

namespace {

double squared_distance(std::span<const double> x, std::span<const double> x2) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - x2[i];
        sum += d * d;
    }
    return sum;
}

}  // namespace

double rbf_kernel(std::span<const double> x, std::span<const double> x2, double sigma) {
    if (x.size() != x2.size()) {
        throw InvalidArgument(fmt::format("kernel arguments differ in dimension ({} vs {})", x.size(), x2.size()));
    }
    if (!(sigma > 0.0)) {
        throw InvalidArgument(fmt::format("RBF sigma must be positive, got {}", sigma));
    }
    return std::exp(-squared_distance(x, x2) / (2.0 * sigma * sigma));
}

double kernel_value(const KernelSpec& spec, std::span<const double> x, std::span<const double> x2) noexcept {
    if (spec.kind == KernelKind::linear) {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * x2[i];
        return dot;
    }
    return std::exp(-squared_distance(x, x2) / (2.0 * spec.sigma * spec.sigma));
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const FeatureRows& inputs) {
    spec.validate();
    const Eigen::Index m = inputs.rows();
    Eigen::MatrixXd gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        gram(i, i) = kernel_value(spec, row_span(inputs, i), row_span(inputs, i));
        for (Eigen::Index j = 0; j < i; ++j) {
            const double k = kernel_value(spec, row_span(inputs, i), row_span(inputs, j));
            gram(i, j) = k;
            gram(j, i) = k;
        }
    }
    return gram;
}

double median_pairwise_distance(const FeatureRows& inputs) {
    const Eigen::Index m = inputs.rows();
    if (m < 2) {
        throw InvalidArgument("median distance needs at least two samples");
    }
    std::vector<double> distances;
    distances.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            distances.push_back(std::sqrt(squared_distance(row_span(inputs, i), row_span(inputs, j))));
        }
    }
    const std::size_t mid = distances.size() / 2;
    std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid), distances.end());
    double median = distances[mid];
    if (distances.size() % 2 == 0) {
        const double lower = *std::max_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
    }
    return median;
}

}  // namespace stripml
