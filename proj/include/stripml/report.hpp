// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/crossval.hpp"
#include "stripml/roc.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace stripml {

struct NamedCurve {
    std::string name;
    RocCurve curve;
    double auc = 0.0;
};

inline constexpr const char* class_table_header = "class,samples,tp,tn,fp,fn,accuracy,sensitivity,specificity";
inline constexpr const char* roc_table_header = "curve,fpr,tpr";

/// One row per class with one-vs-rest counts and percentages.
void write_class_table(const std::filesystem::path& path, std::span<const ClassReport> classes);

/// Rows of class name, truth, prediction and fold for every sample.
void write_predictions(const std::filesystem::path& path, const std::vector<std::string>& class_names,
                       std::span<const int> truth, const CrossValidationResult& result);

void write_roc_csv(const std::filesystem::path& path, std::span<const NamedCurve> curves);

/// Standalone SVG plot of sensitivity against 1 - specificity with a legend
/// listing each curve's AUC.
void write_roc_svg(const std::filesystem::path& path, std::span<const NamedCurve> curves, const std::string& title);

/// Reads a table written by write_roc_csv.
std::vector<NamedCurve> read_roc_csv(const std::filesystem::path& path);

/// Reads a table written by write_class_table.
std::vector<ClassReport> read_class_table(const std::filesystem::path& path);

}  // namespace stripml
