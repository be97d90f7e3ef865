// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/features.hpp"

#include "stripml/error.hpp"

#include <fmt/core.h>

#include <cmath>

namespace stripml {

PanelLayout PanelLayout::quarters(double margin) {
    PanelLayout layout;
    constexpr int height = StripImage::rows / panel_count;
    for (int i = 0; i < panel_count; ++i) {
        layout.panels[i] = {i * height, (i + 1) * height};
    }
    layout.margin = margin;
    return layout;
}

PixelRect PanelLayout::panel_region(int i) const {
    const RowRange& range = panels.at(static_cast<std::size_t>(i));
    const int trim_rows = static_cast<int>(std::floor(margin * (range.end - range.begin)));
    const int trim_cols = static_cast<int>(std::floor(margin * StripImage::cols));
    return {range.begin + trim_rows, range.end - trim_rows, trim_cols, StripImage::cols - trim_cols};
}

void PanelLayout::validate() const {
    if (!(margin >= 0.0 && margin < 0.5)) {
        throw InvalidArgument(fmt::format("panel margin {} outside [0, 0.5)", margin));
    }
    int previous_end = 0;
    for (int i = 0; i < panel_count; ++i) {
        const RowRange& r = panels[i];
        if (r.begin < previous_end || r.end <= r.begin || r.end > StripImage::rows) {
            throw InvalidArgument(fmt::format("panel {} rows [{}, {}) are not ordered, disjoint and inside [0, {})",
                                              i + 1, r.begin, r.end, StripImage::rows));
        }
        if (panel_region(i).empty()) {
            throw InvalidArgument(fmt::format("panel {} is empty after removing the {} margin", i + 1, margin));
        }
        previous_end = r.end;
    }
}

Rgb mean_rgb(const StripImage& strip, const PixelRect& region) { return region_mean(strip.raster(), region); }

Features extract_features(const StripImage& strip, const PanelLayout& layout) {
    layout.validate();
    Features out;
    for (int i = 0; i < panel_count; ++i) {
        const Rgb mean = mean_rgb(strip, layout.panel_region(i));
        for (int c = 0; c < 3; ++c) out.matrix(i, c) = mean[c];
    }
    out.vector = flatten(out.matrix);
    return out;
}

FeatureVector flatten(const FeatureMatrix& matrix) noexcept {
    return Eigen::Map<const FeatureVector>(matrix.data());
}

FeatureMatrix unflatten(const FeatureVector& vector) noexcept {
    return Eigen::Map<const FeatureMatrix>(vector.data());
}

}  // namespace stripml
