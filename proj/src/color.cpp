// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/color.hpp"

#include "stripml/error.hpp"

#include <Eigen/Dense>
#include <fmt/core.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace stripml {

const ColorMatrix& srgb_to_xyz_d50() {
    static const ColorMatrix m = [] {
        ColorMatrix r;
        r << 0.4360747, 0.3850649, 0.1430804,
             0.2225045, 0.7168786, 0.0606169,
             0.0139322, 0.0971045, 0.7141733;
        return r;
    }();
    return m;
}

const ColorMatrix& xyz_d50_to_srgb() {
    static const ColorMatrix m = [] {
        ColorMatrix r;
        r <<  3.1338561, -1.6168667, -0.4906146,
             -0.9787684,  1.9161415,  0.0334540,
              0.0719453, -0.2289914,  1.4052427;
        return r;
    }();
    return m;
}

Rgb white_balance_gains(const Rgb& neutral_measured, double neutral_target) {
    if (!(neutral_target > 0.0 && neutral_target <= 1.0)) {
        throw InvalidArgument(fmt::format("white-balance target {} outside (0, 1]", neutral_target));
    }
    Rgb gains{};
    for (int c = 0; c < 3; ++c) {
        if (!(neutral_measured[c] > 0.0)) {
            throw InvalidArgument(fmt::format("neutral patch channel {} is {}, must be positive", c,
                                              neutral_measured[c]));
        }
        gains[c] = neutral_target / neutral_measured[c];
    }
    return gains;
}

ImageRGB white_balance(const ImageRGB& image, const Rgb& neutral_measured, double neutral_target) {
    const Rgb gains = white_balance_gains(neutral_measured, neutral_target);
    ImageRGB out = image;
    auto data = out.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = clamp_unit(data[i] * gains[i % 3]);
    }
    return out;
}

ColorMatrix fit_color_matrix(const CalibrationTarget& target) {
    const auto count = static_cast<Eigen::Index>(target.patches.size());
    if (count < 3) {
        throw InvalidArgument(fmt::format("color-matrix fit needs at least 3 patches, got {}", count));
    }
    Eigen::MatrixXd measured(count, 3);
    Eigen::MatrixXd reference(count, 3);
    for (Eigen::Index p = 0; p < count; ++p) {
        for (int c = 0; c < 3; ++c) {
            measured(p, c) = target.patches[p].measured_rgb[c];
            reference(p, c) = target.patches[p].reference_xyz[c];
        }
    }
    if (!measured.allFinite() || !reference.allFinite()) {
        throw InvalidArgument("calibration target contains non-finite values");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(measured);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) {
        throw InvalidArgument(fmt::format("measured RGB matrix is rank deficient (rank {})", qr.rank()));
    }
    // Each row p satisfies measured_p^T M^T ~ reference_p^T.
    const Eigen::Matrix3d transposed = qr.solve(reference);
    return transposed.transpose();
}

double color_fit_objective(const ColorMatrix& m, const CalibrationTarget& target) {
    double total = 0.0;
    for (const auto& patch : target.patches) {
        const Eigen::Vector3d rgb(patch.measured_rgb[0], patch.measured_rgb[1], patch.measured_rgb[2]);
        const Eigen::Vector3d xyz(patch.reference_xyz[0], patch.reference_xyz[1], patch.reference_xyz[2]);
        total += (m * rgb - xyz).squaredNorm();
    }
    return total;
}

ImageRGB apply_color_matrix(const ImageRGB& image, const ColorMatrix& m, const ColorMatrix& xyz_to_rgb) {
    if (image.encoding() != Encoding::linear) {
        throw InvalidArgument("color correction requires linear input; image is display-referred");
    }
    if (!m.allFinite() || !xyz_to_rgb.allFinite()) {
        throw InvalidArgument("color matrix contains non-finite entries");
    }
    const Eigen::Matrix3d combined = xyz_to_rgb * m;
    ImageRGB out = image;
    auto data = out.data();
    for (std::size_t i = 0; i < data.size(); i += 3) {
        const Eigen::Vector3d rgb(data[i], data[i + 1], data[i + 2]);
        const Eigen::Vector3d mapped = combined * rgb;
        for (int c = 0; c < 3; ++c) data[i + c] = clamp_unit(mapped[c]);
    }
    out.set_encoding(Encoding::linear);
    return out;
}

namespace {

// Reads non-comment rows of exactly `width` reals.
std::vector<std::vector<double>> read_real_rows(const std::filesystem::path& path, std::size_t width) {
    std::ifstream in(path);
    if (!in) throw FormatError(fmt::format("cannot open '{}'", path.string()));
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<double> row;
        std::string token;
        while (fields >> token) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(token, &used));
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw FormatError(fmt::format("{}:{}: '{}' is not a number", path.string(), line_no, token));
            }
        }
        if (row.empty()) continue;
        if (row.size() != width) {
            throw FormatError(
                fmt::format("{}:{}: expected {} values, found {}", path.string(), line_no, width, row.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

CalibrationTarget read_calibration_target(const std::filesystem::path& path) {
    CalibrationTarget target;
    for (const auto& row : read_real_rows(path, 6)) {
        target.patches.push_back({{row[0], row[1], row[2]}, {row[3], row[4], row[5]}});
    }
    return target;
}

void write_calibration_target(const CalibrationTarget& target, const std::filesystem::path& path) {
    std::ofstream out(path);
    out << "# R G B X Y Z\n";
    for (const auto& p : target.patches) {
        out << fmt::format("{} {} {} {} {} {}\n", p.measured_rgb[0], p.measured_rgb[1], p.measured_rgb[2],
                           p.reference_xyz[0], p.reference_xyz[1], p.reference_xyz[2]);
    }
    if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
}

ColorMatrix read_color_matrix(const std::filesystem::path& path) {
    const auto rows = read_real_rows(path, 3);
    if (rows.size() != 3) {
        throw FormatError(fmt::format("'{}' must hold 3 rows of 3 values, found {} rows", path.string(), rows.size()));
    }
    ColorMatrix m;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

void write_color_matrix(const ColorMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    for (int r = 0; r < 3; ++r) {
        out << fmt::format("{} {} {}\n", m(r, 0), m(r, 1), m(r, 2));
    }
    if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
}

}  // namespace stripml
