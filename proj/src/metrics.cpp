// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/metrics.hpp"

#include "stripml/error.hpp"

#include <fmt/core.h>

namespace stripml {

namespace {

void check_counts(const ConfusionCounts& c) {
    if (c.true_positive < 0 || c.true_negative < 0 || c.false_positive < 0 || c.false_negative < 0) {
        throw InvalidArgument("confusion counts must be non-negative");
    }
}

double percent(std::int64_t numerator, std::int64_t denominator, const char* what) {
    if (denominator <= 0) {
        throw InvalidArgument(fmt::format("{} is undefined: zero denominator", what));
    }
    return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

double accuracy(const ConfusionCounts& c) {
    check_counts(c);
    return percent(c.true_positive + c.true_negative, c.total(), "accuracy");
}

double sensitivity(const ConfusionCounts& c) {
    check_counts(c);
    return percent(c.true_positive, c.true_positive + c.false_negative, "sensitivity");
}

double specificity(const ConfusionCounts& c) {
    check_counts(c);
    return percent(c.true_negative, c.true_negative + c.false_positive, "specificity");
}

ConfusionCounts one_vs_rest_counts(std::span<const int> truth, std::span<const int> predicted, int positive) {
    if (truth.size() != predicted.size()) {
        throw InvalidArgument(fmt::format("{} truths but {} predictions", truth.size(), predicted.size()));
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual = truth[i] == positive;
        const bool claimed = predicted[i] == positive;
        if (actual && claimed) {
            ++c.true_positive;
        } else if (actual) {
            ++c.false_negative;
        } else if (claimed) {
            ++c.false_positive;
        } else {
            ++c.true_negative;
        }
    }
    return c;
}

}  // namespace stripml
