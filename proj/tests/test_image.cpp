// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/error.hpp"
#include "stripml/image.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace stripml;
using testing_support::scratch_dir;
using testing_support::write_bytes;

namespace {

std::string ppm8(int w, int h, const std::vector<unsigned char>& samples) {
    std::string s = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    s.append(samples.begin(), samples.end());
    return s;
}

}  // namespace

TEST(LoadImage, FullScaleRedPixel) {
    const auto dir = scratch_dir();
    write_bytes(dir / "red.ppm", ppm8(1, 1, {255, 0, 0}));
    const ImageRGB img = load_image(dir / "red.ppm");
    ASSERT_EQ(img.width(), 1);
    ASSERT_EQ(img.height(), 1);
    EXPECT_EQ(img.pixel(0, 0), (Rgb{1.0, 0.0, 0.0}));
    EXPECT_EQ(img.encoding(), Encoding::display_referred);
}

TEST(LoadImage, SixteenBitExtremes) {
    const auto dir = scratch_dir();
    std::string s = "P6\n2 1\n65535\n";
    s += std::string(6, '\0');
    s += std::string(6, '\xff');
    write_bytes(dir / "wide.ppm", s);
    const ImageRGB img = load_image(dir / "wide.ppm");
    EXPECT_EQ(img.pixel(0, 0), (Rgb{0.0, 0.0, 0.0}));
    EXPECT_EQ(img.pixel(1, 0), (Rgb{1.0, 1.0, 1.0}));
    EXPECT_EQ(img.encoding(), Encoding::linear);
}

TEST(LoadImage, DividesByMaxval) {
    const auto dir = scratch_dir();
    write_bytes(dir / "p.ppm", ppm8(1, 1, {51, 102, 204}));
    const ImageRGB img = load_image(dir / "p.ppm");
    EXPECT_EQ(img.pixel(0, 0), (Rgb{0.2, 0.4, 0.8}));
}

TEST(LoadImage, ExplicitEncodingOverridesDefault) {
    const auto dir = scratch_dir();
    write_bytes(dir / "p.ppm", ppm8(1, 1, {1, 2, 3}));
    EXPECT_EQ(load_image(dir / "p.ppm", Encoding::linear).encoding(), Encoding::linear);
}

TEST(LoadImage, RejectsTruncatedFile) {
    const auto dir = scratch_dir();
    write_bytes(dir / "t.ppm", ppm8(2, 2, {1, 2, 3, 4, 5}));
    EXPECT_THROW(load_image(dir / "t.ppm"), FormatError);
}

TEST(LoadImage, RejectsUnsupportedFormat) {
    const auto dir = scratch_dir();
    write_bytes(dir / "x.bmp", "BM not an image");
    EXPECT_THROW(load_image(dir / "x.bmp"), FormatError);
}

TEST(LoadImage, RejectsZeroDimension) {
    const auto dir = scratch_dir();
    write_bytes(dir / "z.ppm", "P6\n0 4\n255\n");
    EXPECT_THROW(load_image(dir / "z.ppm"), FormatError);
}

TEST(LoadImage, MissingFileIsAnError) {
    EXPECT_THROW(load_image("/nonexistent/strip.png"), FormatError);
}

class RoundTrip : public ::testing::TestWithParam<std::tuple<std::string, int>> {};

TEST_P(RoundTrip, QuantizedImageSurvivesSaveAndLoad) {
    const auto [ext, depth] = GetParam();
    const auto dir = scratch_dir();
    ImageRGB img(5, 3, Encoding::linear);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 5; ++x) img.set_pixel(x, y, {x / 4.0, y / 2.0, 0.123456 * (x + y) / 6.0});
    }
    const ImageRGB q = quantize(img, depth);
    const auto path = dir / ("img." + ext);
    save_image(q, path, depth);
    const ImageRGB back = load_image(path, Encoding::linear);
    EXPECT_EQ(back, q);
}

INSTANTIATE_TEST_SUITE_P(Formats, RoundTrip,
                         ::testing::Values(std::make_tuple("ppm", 8), std::make_tuple("ppm", 16),
                                           std::make_tuple("png", 8), std::make_tuple("png", 16)));

TEST(Quantize, RejectsOddBitDepth) {
    EXPECT_THROW(quantize(ImageRGB(1, 1), 12), InvalidArgument);
}

TEST(SampleBilinear, PixelCentersReturnStoredValues) {
    ImageRGB img(3, 2);
    img.set_pixel(1, 1, {0.3, 0.6, 0.9});
    EXPECT_EQ(sample_bilinear(img, 1.5, 1.5), (Rgb{0.3, 0.6, 0.9}));
}

TEST(SampleBilinear, InterpolatesBetweenCenters) {
    ImageRGB img(2, 1);
    img.set_pixel(0, 0, {0.0, 0.0, 0.0});
    img.set_pixel(1, 0, {1.0, 0.5, 0.25});
    const Rgb v = sample_bilinear(img, 1.0, 0.5);
    EXPECT_DOUBLE_EQ(v[0], 0.5);
    EXPECT_DOUBLE_EQ(v[1], 0.25);
    EXPECT_DOUBLE_EQ(v[2], 0.125);
}

TEST(SampleBilinear, ClampsAtEdges) {
    ImageRGB img(2, 1);
    img.set_pixel(0, 0, {0.2, 0.2, 0.2});
    img.set_pixel(1, 0, {0.8, 0.8, 0.8});
    EXPECT_EQ(sample_bilinear(img, -3.0, 0.0), (Rgb{0.2, 0.2, 0.2}));
    EXPECT_EQ(sample_bilinear(img, 7.0, 9.0), (Rgb{0.8, 0.8, 0.8}));
}

TEST(RegionMean, AveragesChannels) {
    ImageRGB img(2, 2);
    img.set_pixel(0, 0, {0.2, 0.0, 1.0});
    img.set_pixel(1, 0, {0.4, 0.0, 1.0});
    img.set_pixel(0, 1, {0.2, 1.0, 1.0});
    img.set_pixel(1, 1, {0.4, 1.0, 1.0});
    const Rgb m = region_mean(img, {0, 2, 0, 2});
    EXPECT_NEAR(m[0], 0.3, 1e-15);
    EXPECT_DOUBLE_EQ(m[1], 0.5);
    EXPECT_DOUBLE_EQ(m[2], 1.0);
}

TEST(RegionMean, RejectsEmptyRegion) {
    EXPECT_THROW(region_mean(ImageRGB(2, 2), {1, 1, 0, 2}), InvalidArgument);
}

TEST(StripImage, HasCanonicalShape) {
    const StripImage s;
    EXPECT_EQ(s.raster().width(), 100);
    EXPECT_EQ(s.raster().height(), 700);
    EXPECT_THROW(StripImage(ImageRGB(700, 100), SourceFormat::raw), InvalidArgument);
}

TEST(SourceFormat, NamesRoundTrip) {
    for (auto f : {SourceFormat::jpeg, SourceFormat::raw, SourceFormat::rawc}) {
        EXPECT_EQ(source_format_from_string(to_string(f)), f);
    }
    EXPECT_THROW(source_format_from_string("tiff"), InvalidArgument);
}
