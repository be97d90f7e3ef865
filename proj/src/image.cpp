// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/image.hpp"

#include "stripml/error.hpp"

#include <fmt/core.h>
#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>

namespace stripml {

const char* to_string(Encoding encoding) noexcept {
    return encoding == Encoding::linear ? "linear" : "display-referred";
}

const char* to_string(SourceFormat format) noexcept {
    switch (format) {
        case SourceFormat::jpeg: return "JPEG";
        case SourceFormat::raw: return "RAW";
        case SourceFormat::rawc: return "RAWc";
    }
    return "?";
}

SourceFormat source_format_from_string(const std::string& name) {
    std::string lower;
    std::transform(name.begin(), name.end(), std::back_inserter(lower),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "jpeg" || lower == "jpg") return SourceFormat::jpeg;
    if (lower == "raw") return SourceFormat::raw;
    if (lower == "rawc") return SourceFormat::rawc;
    throw InvalidArgument(fmt::format("unknown source format '{}' (expected jpeg, raw or rawc)", name));
}

ImageRGB::ImageRGB(int width, int height, Encoding encoding) : width_(width), height_(height), encoding_(encoding) {
    if (width < 1 || height < 1) {
        throw InvalidArgument(fmt::format("image dimensions must be positive, got {}x{}", width, height));
    }
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, 0.0);
}

void ImageRGB::fill(const Rgb& value) noexcept {
    for (std::size_t i = 0; i < pixels_.size(); i += 3) {
        pixels_[i] = value[0];
        pixels_[i + 1] = value[1];
        pixels_[i + 2] = value[2];
    }
}

StripImage::StripImage(SourceFormat format) : raster_(cols, rows, format == SourceFormat::jpeg ? Encoding::display_referred : Encoding::linear), format_(format) {}

StripImage::StripImage(ImageRGB raster, SourceFormat format) : raster_(std::move(raster)), format_(format) {
    if (raster_.width() != cols || raster_.height() != rows) {
        throw InvalidArgument(fmt::format("strip raster must be {}x{} (w x h), got {}x{}", cols, rows,
                                          raster_.width(), raster_.height()));
    }
}

namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError(fmt::format("cannot open image '{}'", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::vector<unsigned char>& bytes, std::size_t& pos, const std::filesystem::path& path) {
    for (;;) {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        if (pos < bytes.size() && bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            continue;
        }
        break;
    }
    std::string token;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) {
        token.push_back(static_cast<char>(bytes[pos++]));
    }
    if (token.empty()) {
        throw FormatError(fmt::format("truncated PPM header in '{}'", path.string()));
    }
    return token;
}

int parse_header_int(const std::string& token, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw FormatError(fmt::format("malformed PPM header value '{}' in '{}'", token, path.string()));
    }
}

ImageRGB decode_ppm(const std::vector<unsigned char>& bytes, const std::filesystem::path& path,
                    std::optional<Encoding> encoding) {
    std::size_t pos = 2;
    const int width = parse_header_int(next_token(bytes, pos, path), path);
    const int height = parse_header_int(next_token(bytes, pos, path), path);
    const int maxval = parse_header_int(next_token(bytes, pos, path), path);
    if (width <= 0 || height <= 0) {
        throw FormatError(fmt::format("zero-dimension image '{}' ({}x{})", path.string(), width, height));
    }
    if (maxval < 1 || maxval > 65535) {
        throw FormatError(fmt::format("PPM maxval {} out of range in '{}'", maxval, path.string()));
    }
    ++pos;  // single whitespace byte after maxval
    const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
    const std::size_t needed = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3 * sample_bytes;
    if (pos > bytes.size() || bytes.size() - pos < needed) {
        throw FormatError(fmt::format("truncated PPM pixel data in '{}'", path.string()));
    }
    const Encoding tag = encoding.value_or(sample_bytes == 1 ? Encoding::display_referred : Encoding::linear);
    ImageRGB image(width, height, tag);
    auto out = image.data();
    const double full_scale = maxval;
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned value = bytes[pos + i * sample_bytes];
        if (sample_bytes == 2) value = (value << 8) | bytes[pos + i * 2 + 1];
        out[i] = clamp_unit(value / full_scale);
    }
    return image;
}

struct PngReadState {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadState() { png_destroy_read_struct(&png, info != nullptr ? &info : nullptr, nullptr); }
};

struct ByteSource {
    const std::vector<unsigned char>* bytes;
    std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t length) {
    auto* src = static_cast<ByteSource*>(png_get_io_ptr(png));
    if (src->bytes->size() - src->pos < length) {
        png_error(png, "truncated PNG stream");
    }
    std::copy_n(src->bytes->data() + src->pos, length, out);
    src->pos += length;
}

void png_error_to_jmp(png_structp png, png_const_charp message) {
    auto* msg = static_cast<std::string*>(png_get_error_ptr(png));
    *msg = message;
    std::longjmp(png_jmpbuf(png), 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

ImageRGB decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path,
                    std::optional<Encoding> encoding) {
    std::string message;
    PngReadState state;
    state.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_to_jmp, png_warning_ignore);
    if (state.png == nullptr) throw FormatError("libpng initialisation failed");
    state.info = png_create_info_struct(state.png);
    if (state.info == nullptr) throw FormatError("libpng initialisation failed");

    ByteSource source{&bytes, 0};
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
    std::vector<png_byte> buffer;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(state.png))) {
        throw FormatError(fmt::format("cannot decode PNG '{}': {}", path.string(), message));
    }
    png_set_read_fn(state.png, &source, png_read_from_memory);
    png_read_info(state.png, state.info);
    width = png_get_image_width(state.png, state.info);
    height = png_get_image_height(state.png, state.info);
    bit_depth = png_get_bit_depth(state.png, state.info);
    const int color_type = png_get_color_type(state.png, state.info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(state.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(state.png);
    if (bit_depth < 8) png_set_expand(state.png);
    if ((color_type & PNG_COLOR_MASK_ALPHA) != 0) png_set_strip_alpha(state.png);
    png_read_update_info(state.png, state.info);
    bit_depth = png_get_bit_depth(state.png, state.info);
    const std::size_t row_bytes = png_get_rowbytes(state.png, state.info);
    buffer.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * row_bytes;
    png_read_image(state.png, rows.data());
    png_read_end(state.png, nullptr);

    if (width == 0 || height == 0) {
        throw FormatError(fmt::format("zero-dimension image '{}'", path.string()));
    }
    const bool wide = bit_depth == 16;
    const Encoding tag = encoding.value_or(wide ? Encoding::linear : Encoding::display_referred);
    ImageRGB image(static_cast<int>(width), static_cast<int>(height), tag);
    auto out = image.data();
    const double full_scale = wide ? 65535.0 : 255.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned value = wide ? (static_cast<unsigned>(buffer[2 * i]) << 8) | buffer[2 * i + 1] : buffer[i];
        out[i] = clamp_unit(value / full_scale);
    }
    return image;
}

unsigned quantize_sample(double v, unsigned maxval) noexcept {
    return static_cast<unsigned>(std::lround(clamp_unit(v) * maxval));
}

void check_bit_depth(int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw InvalidArgument(fmt::format("bit depth must be 8 or 16, got {}", bit_depth));
    }
}

}  // namespace

ImageRGB load_image(const std::filesystem::path& path, std::optional<Encoding> encoding) {
    const auto bytes = read_all(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
        return decode_ppm(bytes, path, encoding);
    }
    static constexpr unsigned char png_magic[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (bytes.size() >= 8 && std::equal(std::begin(png_magic), std::end(png_magic), bytes.begin())) {
        return decode_png(bytes, path, encoding);
    }
    throw FormatError(fmt::format("unsupported image format in '{}' (expected binary PPM or PNG)", path.string()));
}

void save_ppm(const ImageRGB& image, const std::filesystem::path& path, int bit_depth) {
    check_bit_depth(bit_depth);
    const unsigned maxval = bit_depth == 8 ? 255U : 65535U;
    std::string header = fmt::format("P6\n{} {}\n{}\n", image.width(), image.height(), maxval);
    std::vector<unsigned char> bytes(header.begin(), header.end());
    const auto data = image.data();
    bytes.reserve(bytes.size() + data.size() * (bit_depth / 8));
    for (double v : data) {
        const unsigned q = quantize_sample(v, maxval);
        if (bit_depth == 16) bytes.push_back(static_cast<unsigned char>(q >> 8));
        bytes.push_back(static_cast<unsigned char>(q & 0xff));
    }
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
}

namespace {

struct PngWriteState {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    ~PngWriteState() {
        png_destroy_write_struct(&png, info != nullptr ? &info : nullptr);
        if (file != nullptr) std::fclose(file);
    }
};

}  // namespace

void save_png(const ImageRGB& image, const std::filesystem::path& path, int bit_depth) {
    check_bit_depth(bit_depth);
    const unsigned maxval = bit_depth == 8 ? 255U : 65535U;
    const std::size_t row_bytes = static_cast<std::size_t>(image.width()) * 3 * (bit_depth / 8);
    std::vector<png_byte> buffer(row_bytes * image.height());
    const auto data = image.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const unsigned q = quantize_sample(data[i], maxval);
        if (bit_depth == 16) {
            buffer[2 * i] = static_cast<png_byte>(q >> 8);
            buffer[2 * i + 1] = static_cast<png_byte>(q & 0xff);
        } else {
            buffer[i] = static_cast<png_byte>(q);
        }
    }
    std::vector<png_bytep> rows(image.height());
    for (int y = 0; y < image.height(); ++y) rows[y] = buffer.data() + y * row_bytes;

    std::string message;
    PngWriteState state;
    state.file = std::fopen(path.string().c_str(), "wb");
    if (state.file == nullptr) throw FormatError(fmt::format("cannot write '{}'", path.string()));
    state.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_to_jmp, png_warning_ignore);
    if (state.png == nullptr) throw FormatError("libpng initialisation failed");
    state.info = png_create_info_struct(state.png);
    if (state.info == nullptr) throw FormatError("libpng initialisation failed");
    if (setjmp(png_jmpbuf(state.png))) {
        throw FormatError(fmt::format("cannot encode PNG '{}': {}", path.string(), message));
    }
    png_init_io(state.png, state.file);
    png_set_IHDR(state.png, state.info, static_cast<png_uint_32>(image.width()),
                 static_cast<png_uint_32>(image.height()), bit_depth, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(state.png, state.info);
    png_write_image(state.png, rows.data());
    png_write_end(state.png, nullptr);
}

void save_image(const ImageRGB& image, const std::filesystem::path& path, int bit_depth) {
    const auto ext = path.extension().string();
    if (ext == ".png" || ext == ".PNG") {
        save_png(image, path, bit_depth);
    } else if (ext == ".ppm" || ext == ".PPM") {
        save_ppm(image, path, bit_depth);
    } else {
        throw InvalidArgument(fmt::format("cannot infer image format from '{}' (use .ppm or .png)", path.string()));
    }
}

ImageRGB quantize(ImageRGB image, int bit_depth) {
    check_bit_depth(bit_depth);
    const unsigned maxval = bit_depth == 8 ? 255U : 65535U;
    for (double& v : image.data()) {
        v = quantize_sample(v, maxval) / static_cast<double>(maxval);
    }
    return image;
}

Rgb sample_bilinear(const ImageRGB& image, double x, double y) noexcept {
    const double sx = x - 0.5;
    const double sy = y - 0.5;
    const int max_x = image.width() - 1;
    const int max_y = image.height() - 1;
    const double fx0 = std::floor(sx);
    const double fy0 = std::floor(sy);
    double tx = sx - fx0;
    double ty = sy - fy0;
    int x0 = static_cast<int>(fx0);
    int y0 = static_cast<int>(fy0);
    if (x0 < 0) {
        x0 = 0;
        tx = 0.0;
    } else if (x0 >= max_x) {
        x0 = max_x;
        tx = 0.0;
    }
    if (y0 < 0) {
        y0 = 0;
        ty = 0.0;
    } else if (y0 >= max_y) {
        y0 = max_y;
        ty = 0.0;
    }
    const int x1 = std::min(x0 + 1, max_x);
    const int y1 = std::min(y0 + 1, max_y);
    Rgb out{};
    for (int c = 0; c < 3; ++c) {
        const double top = image.at(x0, y0, c) * (1.0 - tx) + image.at(x1, y0, c) * tx;
        const double bottom = image.at(x0, y1, c) * (1.0 - tx) + image.at(x1, y1, c) * tx;
        out[c] = top * (1.0 - ty) + bottom * ty;
    }
    return out;
}

Rgb region_mean(const ImageRGB& image, const PixelRect& rect) {
    if (rect.empty()) {
        throw InvalidArgument("mean over an empty region");
    }
    if (rect.row_begin < 0 || rect.col_begin < 0 || rect.row_end > image.height() || rect.col_end > image.width()) {
        throw InvalidArgument(fmt::format("region rows [{}, {}) cols [{}, {}) exceeds {}x{} image", rect.row_begin,
                                          rect.row_end, rect.col_begin, rect.col_end, image.width(), image.height()));
    }
    Rgb sum{};
    for (int y = rect.row_begin; y < rect.row_end; ++y) {
        for (int x = rect.col_begin; x < rect.col_end; ++x) {
            for (int c = 0; c < 3; ++c) sum[c] += image.at(x, y, c);
        }
    }
    const double n = static_cast<double>(rect.area());
    return {sum[0] / n, sum[1] / n, sum[2] / n};
}

}  // namespace stripml
