// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/image.hpp"

#include <array>

namespace stripml {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Strip outline in source-image pixel coordinates, corners ordered
/// top-left, top-right, bottom-right, bottom-left in the strip's own frame.
struct Quad {
    std::array<Point, 4> corners{};

    [[nodiscard]] const Point& top_left() const noexcept { return corners[0]; }
    [[nodiscard]] const Point& top_right() const noexcept { return corners[1]; }
    [[nodiscard]] const Point& bottom_right() const noexcept { return corners[2]; }
    [[nodiscard]] const Point& bottom_left() const noexcept { return corners[3]; }

    /// Signed shoelace area; positive when the corners run clockwise in image
    /// coordinates (y pointing down).
    [[nodiscard]] double signed_area() const noexcept;
};

/// Projective map from the unit square (u across, v along) onto a quad:
/// (0,0) -> corner 0, (1,0) -> corner 1, (1,1) -> corner 2, (0,1) -> corner 3.
class Homography {
  public:
    explicit Homography(const Quad& quad);
    [[nodiscard]] Point map(double u, double v) const noexcept;

  private:
    double a_, b_, c_, d_, e_, f_, g_, h_;
};

/// Validates `quad` against an image of the given size and returns it
/// re-indexed so that the long axis runs from corner 0 to corner 3.
Quad canonical_strip_quad(const Quad& quad, int image_width, int image_height);

/// Resamples the quadrilateral onto the canonical 700x100 strip raster using a
/// projective map and bilinear interpolation. The long axis of the quad always
/// lands on the 700-row axis. The source format defaults to JPEG for
/// display-referred images and RAW for linear ones.
StripImage normalize_strip(const ImageRGB& image, const Quad& corners);
StripImage normalize_strip(const ImageRGB& image, const Quad& corners, SourceFormat format);

inline constexpr double default_inner_margin = 0.1;

/// Drops `margin_fraction` of the rows and columns at every edge and rescales
/// the remaining inner region back to 700x100 with bilinear resampling.
/// `margin_fraction` must lie in [0, 0.4].
StripImage inner_crop(const StripImage& strip, double margin_fraction = default_inner_margin);

}  // namespace stripml
