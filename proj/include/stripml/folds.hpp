// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace stripml {

/// Partition of sample indices {0, ..., n-1} into k folds.
struct FoldPlan {
    std::vector<std::vector<std::size_t>> folds;
    std::uint64_t seed = 0;
    bool stratified = true;

    [[nodiscard]] std::size_t k() const noexcept { return folds.size(); }
    /// Complement of fold `f`, ascending.
    [[nodiscard]] std::vector<std::size_t> training_indices(std::size_t f) const;
};

/// Seeded k-fold partition with fold sizes differing by at most one.
/// Stratified plans shuffle each class separately and deal its members
/// round-robin, continuing the deal across classes; `labels` may be empty for
/// a plain (unstratified) shuffle. Requires 2 <= k <= n.
FoldPlan k_fold_split(std::size_t n, std::size_t k, std::span<const int> labels, std::uint64_t seed,
                      bool stratified = true);

}  // namespace stripml
