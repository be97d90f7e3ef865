// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/dataset.hpp"

#include "stripml/error.hpp"
#include "stripml/features.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <fstream>

namespace stripml {

void BinaryDataset::validate() const {
    if (static_cast<std::size_t>(inputs.rows()) != labels.size()) {
        throw InvalidArgument(fmt::format("{} inputs but {} labels", inputs.rows(), labels.size()));
    }
    if (labels.size() < 2) {
        throw InvalidArgument("binary training needs at least 2 samples");
    }
    bool positive = false;
    bool negative = false;
    for (int y : labels) {
        if (y == 1) {
            positive = true;
        } else if (y == -1) {
            negative = true;
        } else {
            throw InvalidArgument(fmt::format("binary label {} is not +1 or -1", y));
        }
    }
    if (!positive || !negative) {
        throw InvalidArgument("binary training needs both classes; only one label is present");
    }
    if (!inputs.allFinite()) {
        throw InvalidArgument("training inputs contain non-finite values");
    }
}

void LabeledDataset::validate() const {
    if (static_cast<std::size_t>(inputs.rows()) != labels.size()) {
        throw InvalidArgument(fmt::format("{} inputs but {} labels", inputs.rows(), labels.size()));
    }
    for (int y : labels) {
        if (y < 0 || y >= class_count()) {
            throw InvalidArgument(fmt::format("label index {} outside [0, {})", y, class_count()));
        }
    }
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (int y : labels) ++counts.at(static_cast<std::size_t>(y));
    return counts;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out;
    out.class_names = class_names;
    out.inputs.resize(static_cast<Eigen::Index>(indices.size()), inputs.cols());
    out.labels.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.inputs.row(static_cast<Eigen::Index>(i)) = inputs.row(static_cast<Eigen::Index>(indices[i]));
        out.labels.push_back(labels.at(indices[i]));
    }
    return out;
}

int LabeledDataset::intern_class(const std::string& name) {
    const auto it = std::find(class_names.begin(), class_names.end(), name);
    if (it != class_names.end()) return static_cast<int>(it - class_names.begin());
    class_names.push_back(name);
    return static_cast<int>(class_names.size()) - 1;
}

std::string features_csv_header() {
    std::string header = "label";
    for (int p = 1; p <= panel_count; ++p) {
        for (const char* channel : {"r", "g", "b"}) header += fmt::format(",p{}_{}", p, channel);
    }
    return header;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (ch != '\r') {
            current.push_back(ch);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string format_real(double value) { return fmt::format("{}", value); }

LabeledDataset read_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(fmt::format("cannot open features file '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line)) throw FormatError(fmt::format("{}: empty features file", path.string()));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != features_csv_header()) {
        throw FormatError(fmt::format("{}:1: unexpected header '{}'", path.string(), line));
    }
    LabeledDataset data;
    std::vector<double> values;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != feature_dims + 1) {
            throw FormatError(fmt::format("{}:{}: expected {} feature values, found {}", path.string(), line_no,
                                          feature_dims, fields.size() - 1));
        }
        if (fields[0].empty()) throw FormatError(fmt::format("{}:{}: empty label", path.string(), line_no));
        for (std::size_t f = 1; f < fields.size(); ++f) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(fields[f], &used));
                if (used != fields[f].size()) throw std::invalid_argument(fields[f]);
            } catch (const std::exception&) {
                throw FormatError(
                    fmt::format("{}:{}: field {} '{}' is not a number", path.string(), line_no, f + 1, fields[f]));
            }
        }
        data.labels.push_back(data.intern_class(fields[0]));
    }
    data.inputs = Eigen::Map<const FeatureRows>(values.data(), static_cast<Eigen::Index>(data.labels.size()),
                                                feature_dims);
    return data;
}

void write_features_csv(const LabeledDataset& data, const std::filesystem::path& path) {
    data.validate();
    if (data.dims() != feature_dims) {
        throw InvalidArgument(fmt::format("features CSV needs {} columns, dataset has {}", feature_dims, data.dims()));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
    out << features_csv_header() << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.class_names[static_cast<std::size_t>(data.labels[i])];
        for (Eigen::Index j = 0; j < data.dims(); ++j) {
            out << ',' << format_real(data.inputs(static_cast<Eigen::Index>(i), j));
        }
        out << '\n';
    }
    if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
}

}  // namespace stripml
