// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/report.hpp"

#include "stripml/dataset.hpp"
#include "stripml/error.hpp"

#include <fmt/core.h>

#include <fstream>
#include <limits>

namespace stripml {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
    return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(fmt::format("cannot open '{}'", path.string()));
    return in;
}

double parse_real(const std::string& field, const std::filesystem::path& path, int line_no) {
    try {
        std::size_t used = 0;
        const double value = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw FormatError(fmt::format("{}:{}: '{}' is not a number", path.string(), line_no, field));
    }
}

const char* palette_color(std::size_t i) {
    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    return colors[i % std::size(colors)];
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

}  // namespace

void write_class_table(const std::filesystem::path& path, std::span<const ClassReport> classes) {
    auto out = open_for_write(path);
    out << class_table_header << '\n';
    for (const auto& c : classes) {
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", c.name, c.samples, c.counts.true_positive,
                           c.counts.true_negative, c.counts.false_positive, c.counts.false_negative,
                           format_real(c.accuracy), format_real(c.sensitivity), format_real(c.specificity));
    }
}

void write_predictions(const std::filesystem::path& path, const std::vector<std::string>& class_names,
                       std::span<const int> truth, const CrossValidationResult& result) {
    auto out = open_for_write(path);
    out << "index,truth,predicted,fold\n";
    for (std::size_t i = 0; i < truth.size(); ++i) {
        out << fmt::format("{},{},{},{}\n", i, class_names[static_cast<std::size_t>(truth[i])],
                           class_names[static_cast<std::size_t>(result.predictions[i])], result.fold_of[i] + 1);
    }
}

void write_roc_csv(const std::filesystem::path& path, std::span<const NamedCurve> curves) {
    auto out = open_for_write(path);
    out << roc_table_header << '\n';
    for (const auto& named : curves) {
        for (const auto& p : named.curve.points) {
            out << fmt::format("{},{},{}\n", named.name, format_real(p.false_positive_rate),
                               format_real(p.true_positive_rate));
        }
    }
}

void write_roc_svg(const std::filesystem::path& path, std::span<const NamedCurve> curves, const std::string& title) {
    constexpr double left = 60.0;
    constexpr double top = 40.0;
    constexpr double size = 400.0;
    auto out = open_for_write(path);
    out << fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n",
        left + size + 200.0, top + size + 60.0);
    out << fmt::format("<text x=\"{}\" y=\"24\" font-size=\"14\">{}</text>\n", left, escape_xml(title));
    out << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
                       top, size, size);
    out << fmt::format(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n", left,
        top + size, left + size, top);
    for (int tick = 0; tick <= 4; ++tick) {
        const double f = tick / 4.0;
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.2f}</text>\n", left + f * size,
                           top + size + 16.0, f);
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n", left - 6.0,
                           top + size - f * size + 4.0, f);
    }
    out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">1 - specificity</text>\n",
                       left + size / 2, top + size + 36.0);
    out << fmt::format(
        "<text x=\"16\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1f})\">sensitivity</text>\n",
        top + size / 2, top + size / 2);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::string points;
        for (const auto& p : curves[i].curve.points) {
            points += fmt::format("{:.4f},{:.4f} ", left + p.false_positive_rate * size,
                                  top + size - p.true_positive_rate * size);
        }
        out << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
                           palette_color(i), points);
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"{}\">{} (AUC = {:.4f})</text>\n", left + size + 12.0,
                           top + 16.0 + 18.0 * static_cast<double>(i), palette_color(i), escape_xml(curves[i].name),
                           curves[i].auc);
    }
    out << "</svg>\n";
}

std::vector<NamedCurve> read_roc_csv(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::string line;
    std::getline(in, line);
    if (line != roc_table_header) throw FormatError(fmt::format("{}:1: unexpected ROC header", path.string()));
    std::vector<NamedCurve> curves;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw FormatError(fmt::format("{}:{}: expected 3 fields", path.string(), line_no));
        if (curves.empty() || curves.back().name != fields[0]) curves.push_back({fields[0], {}, 0.0});
        curves.back().curve.points.push_back(
            {parse_real(fields[1], path, line_no), parse_real(fields[2], path, line_no)});
    }
    for (auto& c : curves) c.auc = auc(c.curve);
    return curves;
}

std::vector<ClassReport> read_class_table(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::string line;
    std::getline(in, line);
    if (line != class_table_header) throw FormatError(fmt::format("{}:1: unexpected class-table header", path.string()));
    std::vector<ClassReport> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 9) throw FormatError(fmt::format("{}:{}: expected 9 fields", path.string(), line_no));
        ClassReport r;
        r.name = f[0];
        r.samples = static_cast<std::size_t>(parse_real(f[1], path, line_no));
        r.counts.true_positive = static_cast<std::int64_t>(parse_real(f[2], path, line_no));
        r.counts.true_negative = static_cast<std::int64_t>(parse_real(f[3], path, line_no));
        r.counts.false_positive = static_cast<std::int64_t>(parse_real(f[4], path, line_no));
        r.counts.false_negative = static_cast<std::int64_t>(parse_real(f[5], path, line_no));
        r.accuracy = parse_real(f[6], path, line_no);
        r.sensitivity = parse_real(f[7], path, line_no);
        r.specificity = parse_real(f[8], path, line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace stripml
