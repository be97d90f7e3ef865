// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include <cstdint>
#include <span>

namespace stripml {

struct ConfusionCounts {
    std::int64_t true_positive = 0;
    std::int64_t true_negative = 0;
    std::int64_t false_positive = 0;
    std::int64_t false_negative = 0;

    [[nodiscard]] std::int64_t total() const noexcept {
        return true_positive + true_negative + false_positive + false_negative;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// All three rates are percentages in [0, 100].
double accuracy(const ConfusionCounts& c);
double sensitivity(const ConfusionCounts& c);
double specificity(const ConfusionCounts& c);

/// One-vs-rest counts for class `positive` over paired truth/prediction lists.
ConfusionCounts one_vs_rest_counts(std::span<const int> truth, std::span<const int> predicted, int positive);

}  // namespace stripml
