// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/folds.hpp"

#include "stripml/error.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace stripml {

std::vector<std::size_t> FoldPlan::training_indices(std::size_t f) const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < folds.size(); ++g) {
        if (g != f) out.insert(out.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

FoldPlan k_fold_split(std::size_t n, std::size_t k, std::span<const int> labels, std::uint64_t seed, bool stratified) {
    if (k < 2) throw InvalidArgument(fmt::format("fold count k = {} must be at least 2", k));
    if (k > n) throw InvalidArgument(fmt::format("fold count k = {} exceeds sample count n = {}", k, n));
    if (stratified && labels.size() != n) {
        throw InvalidArgument(fmt::format("stratified split needs {} labels, got {}", n, labels.size()));
    }
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> groups;
    if (stratified) {
        std::map<int, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
        for (auto& [label, members] : by_class) groups.push_back(std::move(members));
    } else {
        groups.emplace_back(n);
        std::iota(groups.back().begin(), groups.back().end(), std::size_t{0});
    }

    FoldPlan plan;
    plan.seed = seed;
    plan.stratified = stratified;
    plan.folds.resize(k);
    std::size_t next = 0;
    for (auto& members : groups) {
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t index : members) {
            plan.folds[next].push_back(index);
            next = (next + 1) % k;
        }
    }
    for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
    return plan;
}

}  // namespace stripml
