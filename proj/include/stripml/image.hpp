// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stripml {

using Rgb = std::array<double, 3>;

/// Provenance of pixel values: display-referred (JPEG-like, gamma encoded)
/// or linear (RAW-derived).
enum class Encoding { display_referred, linear };

enum class SourceFormat { jpeg, raw, rawc };

const char* to_string(Encoding encoding) noexcept;
const char* to_string(SourceFormat format) noexcept;
SourceFormat source_format_from_string(const std::string& name);

/// Half-open pixel rectangle [col_begin, col_end) x [row_begin, row_end).
struct PixelRect {
    int row_begin = 0;
    int row_end = 0;
    int col_begin = 0;
    int col_end = 0;

    [[nodiscard]] bool empty() const noexcept { return row_end <= row_begin || col_end <= col_begin; }
    [[nodiscard]] long area() const noexcept {
        return empty() ? 0L : static_cast<long>(row_end - row_begin) * (col_end - col_begin);
    }
};

/// Row-major RGB raster with channel values in [0, 1].
class ImageRGB {
  public:
    ImageRGB() = default;
    ImageRGB(int width, int height, Encoding encoding = Encoding::linear);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] Encoding encoding() const noexcept { return encoding_; }
    void set_encoding(Encoding encoding) noexcept { encoding_ = encoding; }

    [[nodiscard]] double at(int x, int y, int channel) const noexcept {
        return pixels_[index(x, y) + static_cast<std::size_t>(channel)];
    }
    double& at(int x, int y, int channel) noexcept {
        return pixels_[index(x, y) + static_cast<std::size_t>(channel)];
    }
    [[nodiscard]] Rgb pixel(int x, int y) const noexcept {
        const std::size_t i = index(x, y);
        return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
    }
    void set_pixel(int x, int y, const Rgb& value) noexcept {
        const std::size_t i = index(x, y);
        pixels_[i] = value[0];
        pixels_[i + 1] = value[1];
        pixels_[i + 2] = value[2];
    }
    void fill(const Rgb& value) noexcept;

    [[nodiscard]] std::span<const double> data() const noexcept { return pixels_; }
    [[nodiscard]] std::span<double> data() noexcept { return pixels_; }

    friend bool operator==(const ImageRGB&, const ImageRGB&) = default;

  private:
    [[nodiscard]] std::size_t index(int x, int y) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    Encoding encoding_ = Encoding::linear;
    std::vector<double> pixels_;
};

/// Canonical strip raster: 700 rows along the strip's long axis, 100 columns across it.
class StripImage {
  public:
    static constexpr int rows = 700;
    static constexpr int cols = 100;

    explicit StripImage(SourceFormat format = SourceFormat::raw);
    /// Adopts a raster that must be exactly 100 wide and 700 tall.
    StripImage(ImageRGB raster, SourceFormat format);

    [[nodiscard]] double at(int row, int col, int channel) const noexcept { return raster_.at(col, row, channel); }
    double& at(int row, int col, int channel) noexcept { return raster_.at(col, row, channel); }
    [[nodiscard]] Rgb pixel(int row, int col) const noexcept { return raster_.pixel(col, row); }
    void set_pixel(int row, int col, const Rgb& value) noexcept { raster_.set_pixel(col, row, value); }

    [[nodiscard]] SourceFormat format() const noexcept { return format_; }
    [[nodiscard]] const ImageRGB& raster() const noexcept { return raster_; }
    ImageRGB& raster() noexcept { return raster_; }

    friend bool operator==(const StripImage&, const StripImage&) = default;

  private:
    ImageRGB raster_;
    SourceFormat format_;
};

/// Loads a binary PPM (P6, 8 or 16 bit) or PNG (8 or 16 bit) raster. Samples are
/// divided by the format's full-scale value. When `encoding` is not given,
/// 8-bit files are tagged display-referred and 16-bit files linear.
ImageRGB load_image(const std::filesystem::path& path, std::optional<Encoding> encoding = std::nullopt);

/// Writes a binary PPM with the given bit depth (8 or 16); values are clamped and rounded.
void save_ppm(const ImageRGB& image, const std::filesystem::path& path, int bit_depth = 8);

/// Writes an RGB PNG with the given bit depth (8 or 16); values are clamped and rounded.
void save_png(const ImageRGB& image, const std::filesystem::path& path, int bit_depth = 8);

/// Dispatches on the extension (.ppm or .png).
void save_image(const ImageRGB& image, const std::filesystem::path& path, int bit_depth = 8);

/// Rounds every sample to the nearest level of a `bit_depth` integer encoding.
ImageRGB quantize(ImageRGB image, int bit_depth);

/// Samples with bilinear interpolation at continuous coordinates where the
/// center of pixel (i, j) sits at (i + 0.5, j + 0.5). Coordinates outside the
/// raster are clamped to the edge pixels.
Rgb sample_bilinear(const ImageRGB& image, double x, double y) noexcept;

/// Arithmetic per-channel mean over a non-empty rectangle inside the image.
Rgb region_mean(const ImageRGB& image, const PixelRect& rect);

inline double clamp_unit(double v) noexcept { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace stripml
