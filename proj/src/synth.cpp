// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/synth.hpp"

#include "stripml/color.hpp"
#include "stripml/error.hpp"
#include "stripml/hash.hpp"
#include "stripml/parallel.hpp"

#include <fmt/core.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

namespace stripml {

using nlohmann::json;

namespace {

double smoothstep(double t) noexcept {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

Rgb lerp(const Rgb& a, const Rgb& b, double t) noexcept {
    // Exact at both ends.
    const double u = 1.0 - t;
    return {u * a[0] + t * b[0], u * a[1] + t * b[1], u * a[2] + t * b[2]};
}

bool finite_in_unit(double v) noexcept { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

std::string file_safe(const std::string& text) {
    std::string out;
    for (char ch : text) {
        const bool keep = std::isalnum(static_cast<unsigned char>(ch)) != 0 || ch == '.' || ch == '-' || ch == '_';
        out.push_back(keep ? ch : '_');
    }
    return out;
}

double srgb_encode(double v) noexcept {
    v = clamp_unit(v);
    return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

/// 24 linear reference colors spanning the gamut: a 2x3x4 grid.
const ColorMatrix& synthetic_correction_matrix() {
    static const ColorMatrix m = [] {
        CalibrationTarget target;
        for (double r : {0.15, 0.75}) {
            for (double g : {0.1, 0.45, 0.8}) {
                for (double b : {0.05, 0.3, 0.55, 0.9}) {
                    const Eigen::Vector3d rgb(r, g, b);
                    const Eigen::Vector3d xyz = srgb_to_xyz_d50() * rgb;
                    target.patches.push_back({{r, g, b}, {xyz[0], xyz[1], xyz[2]}});
                }
            }
        }
        return fit_color_matrix(target);
    }();
    return m;
}

}  // namespace

// Palette --------------------------------------------------------------------

void ClassPalette::validate() const {
    if (names.size() != colors.size()) {
        throw InvalidArgument(fmt::format("palette has {} names but {} color sets", names.size(), colors.size()));
    }
    if (names.size() < 2) throw InvalidArgument(fmt::format("palette needs at least 2 classes, got {}", names.size()));
    std::set<std::string> seen;
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k].empty()) throw InvalidArgument(fmt::format("palette class {} has an empty name", k));
        if (!seen.insert(names[k]).second) throw InvalidArgument(fmt::format("duplicate palette class '{}'", names[k]));
        for (const auto& panel : colors[k]) {
            for (double v : panel) {
                if (!finite_in_unit(v)) {
                    throw InvalidArgument(fmt::format("palette class '{}' has channel value {} outside [0, 1]",
                                                      names[k], v));
                }
            }
        }
    }
}

ClassPalette ClassPalette::subset(std::span<const int> indices) const {
    ClassPalette out;
    for (int i : indices) {
        if (i < 0 || i >= class_count()) {
            throw InvalidArgument(fmt::format("class index {} outside palette of {} classes", i, class_count()));
        }
        out.names.push_back(names[static_cast<std::size_t>(i)]);
        out.colors.push_back(colors[static_cast<std::size_t>(i)]);
    }
    return out;
}

int ClassPalette::index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InvalidArgument(fmt::format("unknown class '{}'", name));
    return static_cast<int>(it - names.begin());
}

const PanelColors& ClassPalette::acid_anchor() {
    static const PanelColors anchor{
        Rgb{0.85, 0.20, 0.10}, Rgb{0.20, 0.85, 0.80}, Rgb{0.15, 0.15, 0.85}, Rgb{0.80, 0.70, 0.75}};
    return anchor;
}

const PanelColors& ClassPalette::base_anchor() {
    static const PanelColors anchor{
        Rgb{0.20, 0.85, 0.15}, Rgb{0.80, 0.15, 0.20}, Rgb{0.85, 0.80, 0.15}, Rgb{0.10, 0.20, 0.15}};
    return anchor;
}

ClassPalette ClassPalette::standard() {
    constexpr int count = 15;
    ClassPalette palette;
    for (int k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / (count - 1);
        palette.names.push_back(fmt::format("pH{:.1f}", static_cast<double>(k)));
        PanelColors panels;
        for (int p = 0; p < panel_count; ++p) {
            panels[static_cast<std::size_t>(p)] =
                lerp(acid_anchor()[static_cast<std::size_t>(p)], base_anchor()[static_cast<std::size_t>(p)], t);
        }
        palette.colors.push_back(panels);
    }
    return palette;
}

ClassPalette read_palette(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw FormatError(fmt::format("palette file '{}' not found", path.string()));
    const LabeledDataset rows = read_features_csv(path);
    ClassPalette palette;
    palette.names = rows.class_names;
    palette.colors.resize(palette.names.size());
    std::vector<int> filled(palette.names.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto k = static_cast<std::size_t>(rows.labels[i]);
        if (filled[k]++ != 0) {
            throw FormatError(fmt::format("{}: class '{}' appears more than once", path.string(), palette.names[k]));
        }
        for (int p = 0; p < panel_count; ++p) {
            for (int c = 0; c < 3; ++c) {
                palette.colors[k][static_cast<std::size_t>(p)][static_cast<std::size_t>(c)] =
                    rows.inputs(static_cast<Eigen::Index>(i), p * 3 + c);
            }
        }
    }
    try {
        palette.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
    }
    return palette;
}

void write_palette(const ClassPalette& palette, const std::filesystem::path& path) {
    palette.validate();
    LabeledDataset rows;
    rows.class_names = palette.names;
    rows.inputs.resize(palette.class_count(), feature_dims);
    for (int k = 0; k < palette.class_count(); ++k) {
        rows.labels.push_back(k);
        for (int p = 0; p < panel_count; ++p) {
            for (int c = 0; c < 3; ++c) {
                rows.inputs(k, p * 3 + c) =
                    palette.colors[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)][static_cast<std::size_t>(c)];
            }
        }
    }
    write_features_csv(rows, path);
}

// Illuminants ----------------------------------------------------------------

void IlluminantProfile::validate() const {
    for (double g : gains) {
        if (!std::isfinite(g) || g <= 0.0) {
            throw InvalidArgument(fmt::format("illuminant '{}' gain {} must be positive and finite", name, g));
        }
    }
    if (!std::isfinite(gradient) || gradient < 0.0 || gradient > 0.3) {
        throw InvalidArgument(fmt::format("illuminant '{}' gradient {} outside [0, 0.3]", name, gradient));
    }
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) {
        throw InvalidArgument(fmt::format("illuminant '{}' noise sigma {} must be >= 0", name, noise_sigma));
    }
}

const std::vector<std::string>& standard_illuminant_names() {
    static const std::vector<std::string> names{"sunlight", "fluorescent", "halogen"};
    return names;
}

IlluminantProfile standard_illuminant(const std::string& name) {
    if (name == "sunlight") return {name, {1.00, 1.00, 1.00}, default_gradient, default_noise_sigma};
    if (name == "fluorescent") return {name, {0.95, 1.05, 1.10}, default_gradient, default_noise_sigma};
    if (name == "halogen") return {name, {1.15, 1.00, 0.80}, default_gradient, default_noise_sigma};
    throw InvalidArgument(fmt::format("unknown illuminant '{}' (expected sunlight, fluorescent or halogen)", name));
}

IlluminantProfile mix_illuminants(const IlluminantProfile& a, const IlluminantProfile& b, double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument(fmt::format("mixing weight {} outside [0, 1]", w));
    if (w == 1.0) return a;
    if (w == 0.0) return b;
    IlluminantProfile out;
    out.name = a.name + "-" + b.name;
    for (std::size_t c = 0; c < 3; ++c) out.gains[c] = w * a.gains[c] + (1.0 - w) * b.gains[c];
    out.gradient = w * a.gradient + (1.0 - w) * b.gradient;
    out.noise_sigma = w * a.noise_sigma + (1.0 - w) * b.noise_sigma;
    return out;
}

// Rendering ------------------------------------------------------------------

namespace {

/// Noise-free strip appearance at continuous local coordinates, before clamping.
struct StripModel {
    std::array<Rgb, panel_count + 2> regions;
    Rgb gains;
    double slope = 0.0;

    [[nodiscard]] Rgb value(double x, double y) const noexcept {
        using G = StripGeometry;
        int region = 0;
        if (y >= G::handle_rows) region = std::min(1 + static_cast<int>((y - G::handle_rows) / G::panel_rows), 5);
        Rgb color = regions[static_cast<std::size_t>(region)];
        for (int boundary = 0; boundary < panel_count + 1; ++boundary) {
            const double at = G::handle_rows + boundary * G::panel_rows;
            if (std::abs(y - at) < 0.5 * G::transition_rows) {
                const double s = smoothstep((y - at + 0.5 * G::transition_rows) / G::transition_rows);
                color = lerp(regions[static_cast<std::size_t>(boundary)],
                             regions[static_cast<std::size_t>(boundary + 1)], s);
            }
        }
        const double shade = 1.0 + slope * (y / StripImage::rows - 0.5);
        const double edge = std::min({x, StripImage::cols - x, y, StripImage::rows - y});
        const double w = edge >= G::edge_fade ? 1.0 : smoothstep(edge / G::edge_fade);
        Rgb out;
        for (std::size_t c = 0; c < 3; ++c) {
            double v = w * color[c] * shade;
            if (w < 1.0) v += (1.0 - w) * G::background;
            out[c] = v * gains[c];
        }
        return out;
    }
};

/// Draws the gradient slope from `rng`; noise draws continue from it.
StripModel strip_model(int class_id, const ClassPalette& palette, const IlluminantProfile& illuminant,
                       std::mt19937_64& rng) {
    if (class_id < 0 || class_id >= palette.class_count()) {
        throw InvalidArgument(fmt::format("class {} not in palette of {} classes", class_id, palette.class_count()));
    }
    illuminant.validate();
    const auto& panels = palette.colors[static_cast<std::size_t>(class_id)];
    const Rgb backing{StripGeometry::backing, StripGeometry::backing, StripGeometry::backing};
    StripModel model{{backing, panels[0], panels[1], panels[2], panels[3], backing}, illuminant.gains, 0.0};
    if (illuminant.gradient > 0.0) {
        model.slope = std::uniform_real_distribution<double>(-illuminant.gradient, illuminant.gradient)(rng);
    }
    return model;
}

/// Rasterizes `model` at pixel centers; `residual` receives what noise and
/// clamping added to each pixel.
StripImage rasterize(const StripModel& model, const IlluminantProfile& illuminant, std::mt19937_64& rng,
                     ImageRGB* residual) {
    std::normal_distribution<double> noise(0.0, illuminant.noise_sigma > 0.0 ? illuminant.noise_sigma : 1.0);
    StripImage strip(SourceFormat::raw);
    if (residual != nullptr) *residual = ImageRGB(StripImage::cols, StripImage::rows);
    for (int row = 0; row < StripImage::rows; ++row) {
        for (int col = 0; col < StripImage::cols; ++col) {
            const Rgb clean = model.value(col + 0.5, row + 0.5);
            Rgb value;
            for (std::size_t c = 0; c < 3; ++c) {
                double v = clean[c];
                if (illuminant.noise_sigma > 0.0) v += noise(rng);
                value[c] = clamp_unit(v);
            }
            strip.set_pixel(row, col, value);
            if (residual != nullptr) {
                residual->set_pixel(col, row, {value[0] - clean[0], value[1] - clean[1], value[2] - clean[2]});
            }
        }
    }
    return strip;
}

}  // namespace

StripImage render_strip(int class_id, const ClassPalette& palette, const IlluminantProfile& illuminant,
                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const StripModel model = strip_model(class_id, palette, illuminant, rng);
    return rasterize(model, illuminant, rng, nullptr);
}

void SceneSpec::validate() const {
    if (canvas_width <= 0 || canvas_height <= 0) {
        throw InvalidArgument(fmt::format("canvas {}x{} must be non-empty", canvas_width, canvas_height));
    }
    if (!std::isfinite(angle_degrees) || !std::isfinite(center.x) || !std::isfinite(center.y)) {
        throw InvalidArgument("scene pose must be finite");
    }
    illuminant.validate();
    for (const auto& p : scene_quad(*this).corners) {
        if (p.x < 0.0 || p.y < 0.0 || p.x > canvas_width || p.y > canvas_height) {
            throw InvalidArgument(fmt::format(
                "strip at center ({}, {}) angle {} clips the {}x{} canvas at corner ({:.3f}, {:.3f})", center.x,
                center.y, angle_degrees, canvas_width, canvas_height, p.x, p.y));
        }
    }
}

SceneSpec SceneSpec::random_pose(int canvas_width, int canvas_height, const IlluminantProfile& illuminant,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0x706f7365));
    SceneSpec spec;
    spec.canvas_width = canvas_width;
    spec.canvas_height = canvas_height;
    spec.illuminant = illuminant;
    spec.seed = seed;
    spec.angle_degrees = std::uniform_real_distribution<double>(0.0, 360.0)(rng);
    const double theta = spec.angle_degrees * std::numbers::pi / 180.0;
    const double c = std::abs(std::cos(theta));
    const double s = std::abs(std::sin(theta));
    const double half_x = 0.5 * (c * StripImage::cols + s * StripImage::rows);
    const double half_y = 0.5 * (s * StripImage::cols + c * StripImage::rows);
    if (2.0 * half_x > canvas_width || 2.0 * half_y > canvas_height) {
        throw InvalidArgument(fmt::format("a {}x{} canvas cannot hold the strip at angle {:.2f}", canvas_width,
                                          canvas_height, spec.angle_degrees));
    }
    spec.center.x = std::uniform_real_distribution<double>(half_x, canvas_width - half_x)(rng);
    spec.center.y = std::uniform_real_distribution<double>(half_y, canvas_height - half_y)(rng);
    return spec;
}

Quad scene_quad(const SceneSpec& spec) {
    const double theta = spec.angle_degrees * std::numbers::pi / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto place = [&](double lx, double ly) {
        const double dx = lx - 0.5 * StripImage::cols;
        const double dy = ly - 0.5 * StripImage::rows;
        return Point{spec.center.x + c * dx - s * dy, spec.center.y + s * dx + c * dy};
    };
    return Quad{{place(0.0, 0.0), place(StripImage::cols, 0.0), place(StripImage::cols, StripImage::rows),
                 place(0.0, StripImage::rows)}};
}

Scene render_scene(const SceneSpec& spec, const ClassPalette& palette, int class_id) {
    spec.validate();
    // Same draws as render_strip(class_id, palette, spec.illuminant, spec.seed).
    std::mt19937_64 rng(spec.seed);
    const StripModel model = strip_model(class_id, palette, spec.illuminant, rng);
    ImageRGB residual;
    rasterize(model, spec.illuminant, rng, &residual);
    Scene scene{ImageRGB(spec.canvas_width, spec.canvas_height, Encoding::linear), scene_quad(spec)};
    Rgb background;
    for (std::size_t c = 0; c < 3; ++c) background[c] = StripGeometry::background * spec.illuminant.gains[c];
    scene.image.fill(background);

    double min_x = spec.canvas_width, max_x = 0.0, min_y = spec.canvas_height, max_y = 0.0;
    for (const auto& p : scene.quad.corners) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double theta = spec.angle_degrees * std::numbers::pi / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const int x_end = std::min(spec.canvas_width, static_cast<int>(std::ceil(max_x)) + 1);
    const int y_end = std::min(spec.canvas_height, static_cast<int>(std::ceil(max_y)) + 1);
    for (int y = std::max(0, static_cast<int>(min_y) - 1); y < y_end; ++y) {
        for (int x = std::max(0, static_cast<int>(min_x) - 1); x < x_end; ++x) {
            const double dx = x + 0.5 - spec.center.x;
            const double dy = y + 0.5 - spec.center.y;
            const double lx = c * dx + s * dy + 0.5 * StripImage::cols;
            const double ly = -s * dx + c * dy + 0.5 * StripImage::rows;
            if (lx < 0.0 || ly < 0.0 || lx > StripImage::cols || ly > StripImage::rows) continue;
            // The smooth part is evaluated exactly; only noise is resampled.
            const Rgb clean = model.value(lx, ly);
            const Rgb extra = sample_bilinear(residual, lx, ly);
            scene.image.set_pixel(x, y, {clamp_unit(clean[0] + extra[0]), clamp_unit(clean[1] + extra[1]),
                                         clamp_unit(clean[2] + extra[2])});
        }
    }
    return scene;
}

ImageRGB develop(ImageRGB linear, SourceFormat format, const IlluminantProfile& illuminant) {
    if (linear.encoding() != Encoding::linear) throw InvalidArgument("develop expects a linear scene");
    switch (format) {
        case SourceFormat::raw:
            return linear;
        case SourceFormat::jpeg:
            for (double& v : linear.data()) v = srgb_encode(v);
            linear.set_encoding(Encoding::display_referred);
            return linear;
        case SourceFormat::rawc: {
            Rgb neutral;
            for (std::size_t c = 0; c < 3; ++c) neutral[c] = StripGeometry::background * illuminant.gains[c];
            const ImageRGB balanced = white_balance(linear, neutral, StripGeometry::background);
            return apply_color_matrix(balanced, synthetic_correction_matrix(), xyz_d50_to_srgb());
        }
    }
    throw InvalidArgument("unknown source format");
}

// Manifest -------------------------------------------------------------------

void write_manifest(std::span<const ManifestRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
    out << manifest_header << '\n';
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{}", r.filename, r.class_name, r.illuminant, r.pose, r.seed,
                           to_string(r.format));
        for (const auto& p : r.quad.corners) out << ',' << format_real(p.x) << ',' << format_real(p.y);
        out << '\n';
    }
    if (!out) throw FormatError(fmt::format("failed writing '{}'", path.string()));
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(fmt::format("cannot open manifest '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line) || line != manifest_header) {
        throw FormatError(fmt::format("{}:1: expected header '{}'", path.string(), manifest_header));
    }
    std::vector<ManifestRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 14) {
            throw FormatError(fmt::format("{}:{}: expected 14 fields, got {}", path.string(), line_no, f.size()));
        }
        ManifestRow r;
        r.filename = f[0];
        r.class_name = f[1];
        r.illuminant = f[2];
        try {
            std::size_t used = 0;
            r.pose = std::stoi(f[3], &used);
            if (used != f[3].size()) throw std::invalid_argument(f[3]);
            r.seed = std::stoull(f[4], &used);
            if (used != f[4].size()) throw std::invalid_argument(f[4]);
            r.format = source_format_from_string(f[5]);
            for (std::size_t k = 0; k < 4; ++k) {
                r.quad.corners[k].x = std::stod(f[6 + 2 * k], &used);
                if (used != f[6 + 2 * k].size()) throw std::invalid_argument(f[6 + 2 * k]);
                r.quad.corners[k].y = std::stod(f[7 + 2 * k], &used);
                if (used != f[7 + 2 * k].size()) throw std::invalid_argument(f[7 + 2 * k]);
            }
        } catch (const std::exception& e) {
            throw FormatError(fmt::format("{}:{}: malformed manifest row ({})", path.string(), line_no, e.what()));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

// Dataset --------------------------------------------------------------------

void DatasetConfig::validate() const {
    palette.validate();
    if (illuminants.empty()) throw InvalidArgument("dataset config lists no illuminants");
    for (const auto& il : illuminants) il.validate();
    if (images_per_class <= 0) {
        throw InvalidArgument(fmt::format("images_per_class is {}; every class would be empty", images_per_class));
    }
    if (bit_depth != 0 && bit_depth != 8 && bit_depth != 16) {
        throw InvalidArgument(fmt::format("bit depth must be 8 or 16, got {}", bit_depth));
    }
    if (format == SourceFormat::jpeg && bit_depth > 8) {
        throw InvalidArgument("jpeg archives are limited to 8 bits per channel");
    }
    if (!random_pose) {
        SceneSpec spec;
        spec.canvas_width = canvas_width;
        spec.canvas_height = canvas_height;
        spec.center = {canvas_width / 2.0, canvas_height / 2.0};
        spec.illuminant = illuminants.front();
        spec.validate();
    } else if (canvas_width <= 0 || canvas_height <= 0) {
        throw InvalidArgument(fmt::format("canvas {}x{} must be non-empty", canvas_width, canvas_height));
    }
    if (!(inner_margin >= 0.0 && inner_margin <= 0.4)) {
        throw InvalidArgument(fmt::format("inner margin {} outside [0, 0.4]", inner_margin));
    }
    layout.validate();
}

int DatasetConfig::effective_bit_depth() const noexcept {
    if (bit_depth != 0) return bit_depth;
    return format == SourceFormat::jpeg ? 8 : 16;
}

GeneratedDataset generate_dataset(const DatasetConfig& config) {
    config.validate();
    const auto classes = static_cast<std::size_t>(config.palette.class_count());
    const std::size_t lights = config.illuminants.size();
    const auto poses = static_cast<std::size_t>(config.images_per_class);
    const std::size_t total = classes * lights * poses;
    if (config.image_dir) std::filesystem::create_directories(*config.image_dir);

    GeneratedDataset out;
    out.features.class_names = config.palette.names;
    out.features.inputs.resize(static_cast<Eigen::Index>(total), feature_dims);
    out.features.labels.resize(total);
    out.manifest.resize(total);

    parallel_for(total, config.threads, [&](std::size_t i) {
        const auto class_id = static_cast<int>(i / (lights * poses));
        const IlluminantProfile& illuminant = config.illuminants[(i / poses) % lights];
        const auto pose = static_cast<int>(i % poses);
        const std::uint64_t seed = mix_seed(config.seed, i);

        SceneSpec spec;
        if (config.random_pose) {
            spec = SceneSpec::random_pose(config.canvas_width, config.canvas_height, illuminant, seed);
        } else {
            spec.canvas_width = config.canvas_width;
            spec.canvas_height = config.canvas_height;
            spec.center = {config.canvas_width / 2.0, config.canvas_height / 2.0};
            spec.illuminant = illuminant;
            spec.seed = seed;
        }
        Scene scene = render_scene(spec, config.palette, class_id);
        const ImageRGB archived =
            quantize(develop(std::move(scene.image), config.format, illuminant), config.effective_bit_depth());
        const StripImage strip = inner_crop(normalize_strip(archived, scene.quad, config.format), config.inner_margin);
        const Features features = extract_features(strip, config.layout);

        out.features.inputs.row(static_cast<Eigen::Index>(i)) = features.vector.transpose();
        out.features.labels[i] = class_id;

        ManifestRow& row = out.manifest[i];
        row.filename = fmt::format("images/{:05d}_{}_{}_{}.png", i, file_safe(config.palette.names[static_cast<std::size_t>(class_id)]),
                                   file_safe(illuminant.name), pose);
        row.class_name = config.palette.names[static_cast<std::size_t>(class_id)];
        row.illuminant = illuminant.name;
        row.pose = pose;
        row.seed = seed;
        row.format = config.format;
        row.quad = scene.quad;
        if (config.image_dir) {
            save_png(archived, *config.image_dir / std::filesystem::path(row.filename).filename(),
                     config.effective_bit_depth());
        }
    });
    return out;
}

// Config ---------------------------------------------------------------------

namespace {

IlluminantProfile illuminant_from_json(const json& node) {
    if (node.is_string()) return standard_illuminant(node.get<std::string>());
    if (!node.is_object()) throw InvalidArgument("illuminant entries must be names or objects");
    if (node.contains("mix")) {
        const json& parts = node.at("mix");
        if (!parts.is_array() || parts.size() != 2) throw InvalidArgument("'mix' needs exactly two illuminants");
        const double w = node.value("w", 0.5);
        return mix_illuminants(illuminant_from_json(parts[0]), illuminant_from_json(parts[1]), w);
    }
    IlluminantProfile il;
    if (node.contains("base")) il = standard_illuminant(node.at("base").get<std::string>());
    il.name = node.value("name", il.name);
    if (node.contains("gains")) {
        const auto g = node.at("gains").get<std::vector<double>>();
        if (g.size() != 3) throw InvalidArgument("illuminant 'gains' needs three values");
        il.gains = {g[0], g[1], g[2]};
    }
    il.gradient = node.value("gradient", il.gradient);
    il.noise_sigma = node.value("noise_sigma", il.noise_sigma);
    if (il.name.empty()) throw InvalidArgument("custom illuminant needs a name");
    il.validate();
    return il;
}

}  // namespace

DatasetConfig dataset_config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
    static const std::set<std::string> known{"seed",         "classes",    "palette_file", "illuminants",
                                             "noise_sigma",  "gradient",   "images_per_class", "format",
                                             "random_pose",  "canvas",     "bit_depth",    "inner_margin",
                                             "panel_margin", "write_images"};
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!root.is_object()) throw FormatError("config must be a JSON object");
    for (const auto& [key, value] : root.items()) {
        if (!known.contains(key)) throw FormatError(fmt::format("unknown config key '{}'", key));
    }
    DatasetConfig config;
    try {
        config.seed = root.value("seed", std::uint64_t{0});
        if (root.contains("palette_file")) {
            std::filesystem::path file = root.at("palette_file").get<std::string>();
            if (file.is_relative()) file = base_dir / file;
            config.palette = read_palette(file);
        }
        if (root.contains("classes")) {
            std::vector<int> keep;
            for (const auto& entry : root.at("classes")) {
                keep.push_back(entry.is_string() ? config.palette.index_of(entry.get<std::string>()) : entry.get<int>());
            }
            config.palette = config.palette.subset(keep);
        }
        if (root.contains("illuminants")) {
            config.illuminants.clear();
            for (const auto& entry : root.at("illuminants")) config.illuminants.push_back(illuminant_from_json(entry));
        }
        for (auto& il : config.illuminants) {
            il.noise_sigma = root.value("noise_sigma", il.noise_sigma);
            il.gradient = root.value("gradient", il.gradient);
        }
        config.images_per_class = root.value("images_per_class", config.images_per_class);
        if (root.contains("format")) config.format = source_format_from_string(root.at("format").get<std::string>());
        config.random_pose = root.value("random_pose", config.random_pose);
        if (root.contains("canvas")) {
            const auto canvas = root.at("canvas").get<std::vector<int>>();
            if (canvas.size() != 2) throw InvalidArgument("'canvas' needs [width, height]");
            config.canvas_width = canvas[0];
            config.canvas_height = canvas[1];
        }
        config.bit_depth = root.value("bit_depth", config.bit_depth);
        config.inner_margin = root.value("inner_margin", config.inner_margin);
        config.write_images = root.value("write_images", config.write_images);
        if (root.contains("panel_margin")) config.layout = PanelLayout::quarters(root.at("panel_margin").get<double>());
    } catch (const json::exception& e) {
        throw FormatError(fmt::format("config: {}", e.what()));
    }
    config.validate();
    return config;
}

}  // namespace stripml
