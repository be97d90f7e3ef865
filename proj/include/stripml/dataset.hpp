// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace stripml {

/// One sample per row; rows are contiguous so each can be viewed as a span.
using FeatureRows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const double> row_span(const FeatureRows& rows, Eigen::Index i) noexcept {
    return {rows.data() + i * rows.cols(), static_cast<std::size_t>(rows.cols())};
}

/// Training pairs with labels in {+1, -1}.
struct BinaryDataset {
    FeatureRows inputs;
    std::vector<int> labels;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    /// Throws unless sizes agree, M >= 2, labels are +-1 and both classes occur.
    void validate() const;
};

/// Multi-class samples; `labels[i]` indexes `class_names`.
struct LabeledDataset {
    FeatureRows inputs;
    std::vector<int> labels;
    std::vector<std::string> class_names;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] Eigen::Index dims() const noexcept { return inputs.cols(); }
    [[nodiscard]] int class_count() const noexcept { return static_cast<int>(class_names.size()); }

    /// Throws unless sizes agree and every label indexes a class name.
    void validate() const;
    [[nodiscard]] std::vector<std::size_t> class_counts() const;
    /// Rows at `indices`, in that order, keeping the full class list.
    [[nodiscard]] LabeledDataset subset(std::span<const std::size_t> indices) const;
    /// Index of `name` in class_names, appending it when absent.
    int intern_class(const std::string& name);
};

/// Features CSV: header `label,p1_r,p1_g,p1_b,...,p4_b`, one row per image.
/// Class order follows first appearance.
LabeledDataset read_features_csv(const std::filesystem::path& path);
void write_features_csv(const LabeledDataset& data, const std::filesystem::path& path);
std::string features_csv_header();

/// Splits one CSV line on commas (no quoting; fields never contain commas).
std::vector<std::string> split_csv_line(const std::string& line);

/// Round-trip decimal representation used for every real written to disk.
std::string format_real(double value);

}  // namespace stripml
