// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/image.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <vector>

namespace stripml {

/// 3x3 map from device RGB to a target color space.
using ColorMatrix = Eigen::Matrix3d;

struct CalibrationPatch {
    Rgb measured_rgb{};
    Rgb reference_xyz{};
};

/// Chart patches with device measurements and CIE 1931 XYZ references (D50).
struct CalibrationTarget {
    std::vector<CalibrationPatch> patches;
};

/// Linear sRGB primaries, Bradford-adapted to D50.
const ColorMatrix& srgb_to_xyz_d50();
const ColorMatrix& xyz_d50_to_srgb();

/// Per-channel gains target / measured_c.
Rgb white_balance_gains(const Rgb& neutral_measured, double neutral_target);

/// Scales each channel so that `neutral_measured` maps to the gray level
/// `neutral_target`; results are clamped to [0, 1].
ImageRGB white_balance(const ImageRGB& image, const Rgb& neutral_measured, double neutral_target);

/// Ordinary least-squares 3x3 fit of reference_xyz ~ M * measured_rgb.
ColorMatrix fit_color_matrix(const CalibrationTarget& target);

/// Sum of squared residuals of `m` over the target's patches.
double color_fit_objective(const ColorMatrix& m, const CalibrationTarget& target);

/// Maps each pixel through xyz_to_rgb * m and clamps. Display-referred input
/// is refused: the correction is only meaningful on linear data.
ImageRGB apply_color_matrix(const ImageRGB& image, const ColorMatrix& m, const ColorMatrix& xyz_to_rgb);

/// Whitespace-separated rows of "R G B X Y Z"; '#' starts a comment.
CalibrationTarget read_calibration_target(const std::filesystem::path& path);
void write_calibration_target(const CalibrationTarget& target, const std::filesystem::path& path);

/// Three rows of three reals, row-major.
ColorMatrix read_color_matrix(const std::filesystem::path& path);
void write_color_matrix(const ColorMatrix& m, const std::filesystem::path& path);

}  // namespace stripml
