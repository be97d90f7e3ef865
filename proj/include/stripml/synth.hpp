// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/dataset.hpp"
#include "stripml/features.hpp"
#include "stripml/geometry.hpp"
#include "stripml/image.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stripml {

using PanelColors = std::array<Rgb, panel_count>;

struct ClassPalette {
    std::vector<std::string> names;
    std::vector<PanelColors> colors;

    [[nodiscard]] int class_count() const noexcept { return static_cast<int>(names.size()); }
    /// Throws unless K >= 2, names are unique and every channel is in [0, 1].
    void validate() const;
    /// Keeps the classes at `indices`, in that order.
    [[nodiscard]] ClassPalette subset(std::span<const int> indices) const;
    [[nodiscard]] int index_of(const std::string& name) const;

    /// Fifteen classes "pH0.0".."pH14.0"; every panel moves linearly from its
    /// acid anchor to its base anchor.
    static ClassPalette standard();
    static const PanelColors& acid_anchor();
    static const PanelColors& base_anchor();
};

/// Palette file: same schema as a features CSV, one row per class.
ClassPalette read_palette(const std::filesystem::path& path);
void write_palette(const ClassPalette& palette, const std::filesystem::path& path);

struct IlluminantProfile {
    std::string name;
    Rgb gains{1.0, 1.0, 1.0};
    /// Per-image slope amplitude along the long axis, in [0, 0.3].
    double gradient = 0.05;
    double noise_sigma = 0.01;

    void validate() const;
};

inline constexpr double default_noise_sigma = 0.01;
inline constexpr double default_gradient = 0.05;

/// "sunlight", "fluorescent" or "halogen".
IlluminantProfile standard_illuminant(const std::string& name);
const std::vector<std::string>& standard_illuminant_names();

/// Weighted blend w*a + (1-w)*b of gains, gradient and noise.
IlluminantProfile mix_illuminants(const IlluminantProfile& a, const IlluminantProfile& b, double w);

/// Raster rows 0..69 and 630..699 hold the white backing; the four panels
/// fill 70..629 in equal 140-row bands so that they line up with the
/// quarter layout after the default inner crop.
struct StripGeometry {
    static constexpr int handle_rows = 70;
    static constexpr int panel_rows = 140;
    static constexpr double transition_rows = 16.0;
    static constexpr double edge_fade = 8.0;
    static constexpr double backing = 0.85;
    static constexpr double background = 0.5;
};

/// Base colors times gains times a seeded linear gradient plus gaussian
/// noise, clamped to [0, 1]. Linear encoding.
StripImage render_strip(int class_id, const ClassPalette& palette, const IlluminantProfile& illuminant,
                        std::uint64_t seed);

struct SceneSpec {
    int canvas_width = 800;
    int canvas_height = 800;
    Point center{400.0, 400.0};
    double angle_degrees = 0.0;
    IlluminantProfile illuminant;
    /// Seeds the strip rendering; render_scene uses render_strip with this seed.
    std::uint64_t seed = 0;

    void validate() const;
    /// Uniform angle and a uniform center among placements that keep the
    /// strip inside the canvas.
    static SceneSpec random_pose(int canvas_width, int canvas_height, const IlluminantProfile& illuminant,
                                 std::uint64_t seed);
};

/// Strip corners in canvas coordinates (TL, TR, BR, BL of the raster).
Quad scene_quad(const SceneSpec& spec);

struct Scene {
    ImageRGB image;
    Quad quad;
};

/// Throws InvalidArgument when any strip corner falls outside the canvas.
Scene render_scene(const SceneSpec& spec, const ClassPalette& palette, int class_id);

/// Converts a linear scene into the archived representation of `format`.
/// jpeg: sRGB-encoded; raw: unchanged; rawc: white balanced on the
/// illuminant's neutral and color corrected through a fitted matrix.
ImageRGB develop(ImageRGB linear, SourceFormat format, const IlluminantProfile& illuminant);

struct ManifestRow {
    std::string filename;
    std::string class_name;
    std::string illuminant;
    int pose = 0;
    std::uint64_t seed = 0;
    SourceFormat format = SourceFormat::raw;
    Quad quad;
};

inline constexpr const char* manifest_header = "filename,class,illuminant,pose,seed,format,x0,y0,x1,y1,x2,y2,x3,y3";

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);
void write_manifest(std::span<const ManifestRow> rows, const std::filesystem::path& path);

struct DatasetConfig {
    std::uint64_t seed = 0;
    ClassPalette palette = ClassPalette::standard();
    std::vector<IlluminantProfile> illuminants{standard_illuminant("sunlight")};
    /// Images per (class, illuminant) pair.
    int images_per_class = 30;
    SourceFormat format = SourceFormat::raw;
    /// Axis-aligned centered strip when false.
    bool random_pose = true;
    int canvas_width = 800;
    int canvas_height = 800;
    /// 8 or 16; 0 selects 8 bits for jpeg and 16 otherwise.
    int bit_depth = 0;
    double inner_margin = default_inner_margin;
    PanelLayout layout = PanelLayout::quarters();
    /// Requests an image archive from the command layer.
    bool write_images = false;
    /// Images are written here as PNG when set.
    std::optional<std::filesystem::path> image_dir;
    int threads = 1;

    void validate() const;
    [[nodiscard]] int effective_bit_depth() const noexcept;
};

struct GeneratedDataset {
    LabeledDataset features;
    std::vector<ManifestRow> manifest;
};

/// Rows are ordered by class, then illuminant, then pose. Item i is rendered
/// from mix_seed(config.seed, i), so the result does not depend on threads.
GeneratedDataset generate_dataset(const DatasetConfig& config);

/// Reads the JSON generator config. Relative palette_file paths resolve
/// against `base_dir`.
DatasetConfig dataset_config_from_json(const std::string& text, const std::filesystem::path& base_dir);

}  // namespace stripml
