// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/dataset.hpp"
#include "stripml/error.hpp"
#include "stripml/features.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace stripml;
using testing_support::scratch_dir;
using testing_support::write_bytes;

namespace {

const std::array<Rgb, 4> panel_colors{Rgb{0.9, 0.1, 0.2}, Rgb{0.3, 0.7, 0.4}, Rgb{0.15, 0.25, 0.85}, Rgb{0.6, 0.6, 0.05}};

StripImage four_panels() {
    StripImage s;
    for (int row = 0; row < 700; ++row) {
        for (int col = 0; col < 100; ++col) s.set_pixel(row, col, panel_colors[static_cast<std::size_t>(row / 175)]);
    }
    return s;
}

}  // namespace

TEST(MeanRgb, UniformRegion) {
    StripImage s;
    s.raster().fill({0.25, 0.5, 0.75});
    EXPECT_EQ(mean_rgb(s, {0, 700, 0, 100}), (Rgb{0.25, 0.5, 0.75}));
}

TEST(MeanRgb, TwoPixelsAverage) {
    StripImage s;
    s.set_pixel(0, 1, {1.0, 1.0, 1.0});
    EXPECT_EQ(mean_rgb(s, {0, 1, 0, 2}), (Rgb{0.5, 0.5, 0.5}));
}

TEST(MeanRgb, HalfAndHalfRedChannel) {
    StripImage s;
    for (int row = 0; row < 10; ++row) {
        for (int col = 0; col < 10; ++col) s.set_pixel(row, col, {row < 5 ? 0.2 : 0.4, 0.0, 0.0});
    }
    EXPECT_NEAR(mean_rgb(s, {0, 10, 0, 10})[0], 0.3, 1e-15);
}

TEST(MeanRgb, RejectsEmptyRegion) {
    const StripImage s;
    EXPECT_THROW(mean_rgb(s, {5, 5, 0, 100}), InvalidArgument);
}

TEST(PanelLayout, QuartersWithDefaultMargin) {
    const PanelLayout layout = PanelLayout::quarters();
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(layout.panels[static_cast<std::size_t>(i)].begin, 175 * i);
        EXPECT_EQ(layout.panels[static_cast<std::size_t>(i)].end, 175 * (i + 1));
        const PixelRect r = layout.panel_region(i);
        EXPECT_EQ(r.row_begin, 175 * i + 26);
        EXPECT_EQ(r.row_end, 175 * (i + 1) - 26);
        EXPECT_EQ(r.col_begin, 15);
        EXPECT_EQ(r.col_end, 85);
    }
}

TEST(PanelLayout, RejectsOverlapAndEmptyPanels) {
    PanelLayout overlap = PanelLayout::quarters();
    overlap.panels[1].begin = 100;
    EXPECT_THROW(overlap.validate(), InvalidArgument);

    PanelLayout empty = PanelLayout::quarters();
    empty.panels[2] = {350, 350};
    EXPECT_THROW(empty.validate(), InvalidArgument);

    PanelLayout outside = PanelLayout::quarters();
    outside.panels[3].end = 701;
    EXPECT_THROW(outside.validate(), InvalidArgument);

    EXPECT_THROW(PanelLayout::quarters(0.5).validate(), InvalidArgument);
}

TEST(ExtractFeatures, ConstantPanelsGivePanelMajorVector) {
    const Features f = extract_features(four_panels());
    for (int p = 0; p < 4; ++p) {
        for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(f.vector[p * 3 + c], panel_colors[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)], 1e-12);
            EXPECT_EQ(f.matrix(p, c), f.vector[p * 3 + c]);
        }
    }
}

TEST(ExtractFeatures, BlackStripGivesZeroVector) {
    const Features f = extract_features(StripImage{});
    EXPECT_EQ(f.vector, FeatureVector::Zero());
}

TEST(ExtractFeatures, MarginExcludesBorderRing) {
    StripImage s;
    for (int row = 0; row < 175; ++row) {
        for (int col = 0; col < 100; ++col) {
            const bool ring = row < 10 || row >= 165 || col < 10 || col >= 90;
            s.set_pixel(row, col, ring ? Rgb{1.0, 1.0, 1.0} : Rgb{0.5, 0.5, 0.5});
        }
    }
    const Features f = extract_features(s);
    EXPECT_EQ(f.matrix.row(0), Eigen::RowVector3d(0.5, 0.5, 0.5));
}

TEST(ExtractFeatures, PermutingPixelsWithinPanelKeepsFeatures) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StripImage s;
    for (int row = 0; row < 700; ++row) {
        for (int col = 0; col < 100; ++col) s.set_pixel(row, col, {u(rng), u(rng), u(rng)});
    }
    const Features before = extract_features(s);
    const PixelRect r = PanelLayout::quarters().panel_region(2);
    std::vector<Rgb> pixels;
    for (int row = r.row_begin; row < r.row_end; ++row) {
        for (int col = r.col_begin; col < r.col_end; ++col) pixels.push_back(s.pixel(row, col));
    }
    std::shuffle(pixels.begin(), pixels.end(), rng);
    std::size_t k = 0;
    for (int row = r.row_begin; row < r.row_end; ++row) {
        for (int col = r.col_begin; col < r.col_end; ++col) s.set_pixel(row, col, pixels[k++]);
    }
    const Features after = extract_features(s);
    EXPECT_LT((after.vector - before.vector).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ExtractFeatures, BrighteningPanelRaisesMeanByDelta) {
    StripImage s = four_panels();
    const Features before = extract_features(s);
    const double delta = 0.03125;
    for (int row = 175; row < 350; ++row) {
        for (int col = 0; col < 100; ++col) {
            Rgb p = s.pixel(row, col);
            for (double& v : p) v += delta;
            s.set_pixel(row, col, p);
        }
    }
    const Features after = extract_features(s);
    for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(after.matrix(1, c) - before.matrix(1, c), delta, 1e-12);
        EXPECT_EQ(after.matrix(0, c), before.matrix(0, c));
    }
}

TEST(ExtractFeatures, RejectsInvalidLayout) {
    PanelLayout layout = PanelLayout::quarters();
    layout.panels[0] = {10, 5};
    EXPECT_THROW(extract_features(StripImage{}, layout), InvalidArgument);
}

TEST(Flatten, UnflattenInverts) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        FeatureMatrix m;
        for (int i = 0; i < 12; ++i) m(i / 3, i % 3) = u(rng);
        EXPECT_EQ(unflatten(flatten(m)), m);
        EXPECT_EQ(flatten(m)[4], m(1, 1));
    }
}

TEST(FeaturesCsv, HeaderNamesPanelsAndChannels) {
    EXPECT_EQ(features_csv_header(),
              "label,p1_r,p1_g,p1_b,p2_r,p2_g,p2_b,p3_r,p3_g,p3_b,p4_r,p4_g,p4_b");
}

TEST(FeaturesCsv, RoundTripIsExact) {
    const auto dir = scratch_dir();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LabeledDataset d;
    d.class_names = {"pH7.0", "pH4.0"};
    d.inputs.resize(6, 12);
    for (int i = 0; i < 6; ++i) {
        d.labels.push_back(i % 2);
        for (int j = 0; j < 12; ++j) d.inputs(i, j) = u(rng);
    }
    write_features_csv(d, dir / "f.csv");
    const LabeledDataset back = read_features_csv(dir / "f.csv");
    EXPECT_EQ(back.class_names, d.class_names);
    EXPECT_EQ(back.labels, d.labels);
    EXPECT_EQ(back.inputs, d.inputs);
}

TEST(FeaturesCsv, ClassesFollowFirstAppearance) {
    const auto dir = scratch_dir();
    const std::string row = ",0,0,0,0,0,0,0,0,0,0,0,0\n";
    write_bytes(dir / "f.csv", features_csv_header() + "\nb" + row + "a" + row + "b" + row);
    const LabeledDataset d = read_features_csv(dir / "f.csv");
    EXPECT_EQ(d.class_names, (std::vector<std::string>{"b", "a"}));
    EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0}));
}

TEST(FeaturesCsv, ShortRowIsReportedWithLineNumber) {
    const auto dir = scratch_dir();
    write_bytes(dir / "f.csv", features_csv_header() + "\nx,0,0,0,0,0,0,0,0,0,0,0,0\nx,0,0,0,0,0,0,0,0,0,0,0\n");
    try {
        read_features_csv(dir / "f.csv");
        FAIL() << "expected a format error";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
    }
}

TEST(FeaturesCsv, RejectsWrongHeaderAndBadNumbers) {
    const auto dir = scratch_dir();
    write_bytes(dir / "h.csv", "label,a,b\n");
    EXPECT_THROW(read_features_csv(dir / "h.csv"), FormatError);
    write_bytes(dir / "n.csv", features_csv_header() + "\nx,0,0,0,0,0,zero,0,0,0,0,0,0\n");
    EXPECT_THROW(read_features_csv(dir / "n.csv"), FormatError);
}

TEST(LabeledDataset, SubsetKeepsClassList) {
    LabeledDataset d;
    d.class_names = {"a", "b", "c"};
    d.inputs = FeatureRows::Identity(3, 3);
    d.labels = {0, 1, 2};
    const std::vector<std::size_t> keep{2, 0};
    const LabeledDataset s = d.subset(keep);
    EXPECT_EQ(s.class_names, d.class_names);
    EXPECT_EQ(s.labels, (std::vector<int>{2, 0}));
    EXPECT_EQ(s.inputs(0, 2), 1.0);
}
