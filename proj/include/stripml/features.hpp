// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/image.hpp"

#include <Eigen/Core>

#include <array>

namespace stripml {

inline constexpr int panel_count = 4;
inline constexpr int feature_dims = panel_count * 3;

/// Panel i, channel j mean color.
using FeatureMatrix = Eigen::Matrix<double, panel_count, 3, Eigen::RowMajor>;
/// Panel-major flattening: p1 R, p1 G, p1 B, p2 R, ... p4 B.
using FeatureVector = Eigen::Matrix<double, feature_dims, 1>;

struct RowRange {
    int begin = 0;
    int end = 0;
};

/// Row ranges of the four testing panels on the 700x100 strip, plus an
/// inner margin trimmed from every side of each panel before averaging.
struct PanelLayout {
    std::array<RowRange, panel_count> panels{};
    double margin = 0.15;

    /// Four equal quarters of the long axis with a 15% margin.
    static PanelLayout quarters(double margin = 0.15);

    /// Throws InvalidArgument unless ranges are ordered, disjoint, inside the
    /// raster and non-empty after trimming.
    void validate() const;

    /// Pixel rectangle averaged for panel `i` after margin trimming.
    [[nodiscard]] PixelRect panel_region(int i) const;
};

struct Features {
    FeatureMatrix matrix;
    FeatureVector vector;
};

Rgb mean_rgb(const StripImage& strip, const PixelRect& region);

Features extract_features(const StripImage& strip, const PanelLayout& layout = PanelLayout::quarters());

FeatureVector flatten(const FeatureMatrix& matrix) noexcept;
FeatureMatrix unflatten(const FeatureVector& vector) noexcept;

}  // namespace stripml
