// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/geometry.hpp"

#include "stripml/error.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

namespace stripml {

namespace {

double cross(const Point& o, const Point& a, const Point& b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance(const Point& a, const Point& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double Quad::signed_area() const noexcept {
    double twice = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const Point& p = corners[i];
        const Point& q = corners[(i + 1) % 4];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

Homography::Homography(const Quad& quad) {
    const auto& [p0, p1, p2, p3] = quad.corners;
    const double sx = p0.x - p1.x + p2.x - p3.x;
    const double sy = p0.y - p1.y + p2.y - p3.y;
    g_ = 0.0;
    h_ = 0.0;
    if (sx != 0.0 || sy != 0.0) {
        const double dx1 = p1.x - p2.x;
        const double dx2 = p3.x - p2.x;
        const double dy1 = p1.y - p2.y;
        const double dy2 = p3.y - p2.y;
        const double den = dx1 * dy2 - dx2 * dy1;
        g_ = (sx * dy2 - dx2 * sy) / den;
        h_ = (dx1 * sy - sx * dy1) / den;
    }
    a_ = p1.x - p0.x + g_ * p1.x;
    b_ = p3.x - p0.x + h_ * p3.x;
    c_ = p0.x;
    d_ = p1.y - p0.y + g_ * p1.y;
    e_ = p3.y - p0.y + h_ * p3.y;
    f_ = p0.y;
}

Point Homography::map(double u, double v) const noexcept {
    const double w = g_ * u + h_ * v + 1.0;
    return {(a_ * u + b_ * v + c_) / w, (d_ * u + e_ * v + f_) / w};
}

Quad canonical_strip_quad(const Quad& quad, int image_width, int image_height) {
    for (const auto& p : quad.corners) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0 || p.x > image_width ||
            p.y > image_height) {
            throw InvalidArgument(fmt::format("strip corner ({}, {}) lies outside the {}x{} image", p.x, p.y,
                                              image_width, image_height));
        }
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        scale = std::max(scale, distance(quad.corners[i], quad.corners[(i + 1) % 4]));
    }
    // Every consecutive corner triple must turn the same way with a non-zero area.
    const double eps = 1e-9 * scale * scale;
    int positive = 0;
    int negative = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double z = cross(quad.corners[i], quad.corners[(i + 1) % 4], quad.corners[(i + 2) % 4]);
        if (std::abs(z) <= eps) {
            throw InvalidArgument("strip corners are collinear");
        }
        (z > 0 ? positive : negative) += 1;
    }
    if (positive != 4 && negative != 4) {
        throw InvalidArgument("strip corners do not form a convex quadrilateral");
    }

    const auto& c = quad.corners;
    const double across = 0.5 * (distance(c[0], c[1]) + distance(c[3], c[2]));
    const double along = 0.5 * (distance(c[0], c[3]) + distance(c[1], c[2]));
    if (std::min(across, along) < 2.0) {
        throw InvalidArgument(
            fmt::format("strip quad is too thin (shorter side {:.3f} px, need at least 2)", std::min(across, along)));
    }
    if (across > along) {
        return Quad{{c[1], c[2], c[3], c[0]}};
    }
    return quad;
}

StripImage normalize_strip(const ImageRGB& image, const Quad& corners) {
    return normalize_strip(image, corners,
                           image.encoding() == Encoding::display_referred ? SourceFormat::jpeg : SourceFormat::raw);
}

StripImage normalize_strip(const ImageRGB& image, const Quad& corners, SourceFormat format) {
    const Homography map(canonical_strip_quad(corners, image.width(), image.height()));
    StripImage strip(format);
    strip.raster().set_encoding(image.encoding());
    for (int row = 0; row < StripImage::rows; ++row) {
        const double v = (row + 0.5) / StripImage::rows;
        for (int col = 0; col < StripImage::cols; ++col) {
            const double u = (col + 0.5) / StripImage::cols;
            const Point p = map.map(u, v);
            strip.set_pixel(row, col, sample_bilinear(image, p.x, p.y));
        }
    }
    return strip;
}

StripImage inner_crop(const StripImage& strip, double margin_fraction) {
    if (!(margin_fraction >= 0.0 && margin_fraction <= 0.4)) {
        throw InvalidArgument(fmt::format("inner-crop margin {} outside [0, 0.4]", margin_fraction));
    }
    const double y0 = margin_fraction * StripImage::rows;
    const double x0 = margin_fraction * StripImage::cols;
    const double keep = 1.0 - 2.0 * margin_fraction;
    StripImage out(strip.format());
    out.raster().set_encoding(strip.raster().encoding());
    for (int row = 0; row < StripImage::rows; ++row) {
        const double y = y0 + (row + 0.5) * keep;
        for (int col = 0; col < StripImage::cols; ++col) {
            const double x = x0 + (col + 0.5) * keep;
            out.set_pixel(row, col, sample_bilinear(strip.raster(), x, y));
        }
    }
    return out;
}

}  // namespace stripml
