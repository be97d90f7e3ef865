// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/dataset.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

/// Fresh directory named after the running test.
inline std::filesystem::path scratch_dir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    auto dir = std::filesystem::temp_directory_path() / "stripml-tests" /
               (std::string(info->test_suite_name()) + "." + info->name());
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
}

inline std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Two labeled gaussian blobs around -shift and +shift on every axis.
inline stripml::BinaryDataset random_binary(std::size_t m, int dims, std::uint64_t seed, double shift = 0.5) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    stripml::BinaryDataset d;
    d.inputs.resize(static_cast<Eigen::Index>(m), dims);
    for (std::size_t i = 0; i < m; ++i) {
        const int y = (i % 2 == 0) ? 1 : -1;
        d.labels.push_back(y);
        for (int j = 0; j < dims; ++j) d.inputs(static_cast<Eigen::Index>(i), j) = y * shift + noise(rng);
    }
    return d;
}

inline std::vector<std::vector<double>> to_rows(const stripml::FeatureRows& rows) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(rows(i, j));
    }
    return out;
}

/// Well separated clusters in `dims` dimensions, `per_class` points each.
inline stripml::LabeledDataset clusters(int classes, int per_class, int dims, double spread, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spread);
    stripml::LabeledDataset d;
    d.inputs.resize(classes * per_class, dims);
    for (int c = 0; c < classes; ++c) {
        d.class_names.push_back("c" + std::to_string(c));
        for (int p = 0; p < per_class; ++p) {
            const int row = c * per_class + p;
            d.labels.push_back(c);
            for (int j = 0; j < dims; ++j) d.inputs(row, j) = (j % classes == c ? 1.0 : 0.0) + noise(rng);
        }
    }
    return d;
}

}  // namespace testing_support
