// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/model_io.hpp"

#include "stripml/error.hpp"
#include "stripml/hash.hpp"

#include <fmt/core.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace stripml {

std::string to_hex(std::uint64_t value) { return fmt::format("{:016x}", value); }

namespace {

using nlohmann::json;

constexpr const char* format_tag = "stripml-model";

json binary_to_json(const PairwiseModel& pair) {
    const BinaryModel& m = pair.model;
    json inputs = json::array();
    for (Eigen::Index i = 0; i < m.inputs.rows(); ++i) {
        const auto row = row_span(m.inputs, i);
        inputs.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return {
        {"first", pair.first},
        {"second", pair.second},
        {"kernel", {{"kind", to_string(m.kernel.kind)}, {"sigma", m.kernel.sigma}}},
        {"regularization", m.regularization},
        {"bias", m.bias},
        {"alphas", m.alphas},
        {"labels", m.labels},
        {"inputs", std::move(inputs)},
    };
}

PairwiseModel binary_from_json(const json& j, ClassifierKind kind, Eigen::Index dims) {
    PairwiseModel pair;
    pair.first = j.at("first").get<int>();
    pair.second = j.at("second").get<int>();
    BinaryModel& m = pair.model;
    m.kind = kind;
    m.kernel.kind = kernel_kind_from_string(j.at("kernel").at("kind").get<std::string>());
    m.kernel.sigma = j.at("kernel").at("sigma").get<double>();
    m.regularization = j.at("regularization").get<double>();
    m.bias = j.at("bias").get<double>();
    m.alphas = j.at("alphas").get<std::vector<double>>();
    m.labels = j.at("labels").get<std::vector<int>>();
    const auto& inputs = j.at("inputs");
    if (inputs.size() != m.alphas.size() || m.labels.size() != m.alphas.size()) {
        throw FormatError("pairwise model has mismatched alpha, label and input counts");
    }
    m.inputs.resize(static_cast<Eigen::Index>(inputs.size()), dims);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto row = inputs[i].get<std::vector<double>>();
        if (static_cast<Eigen::Index>(row.size()) != dims) {
            throw FormatError(fmt::format("training input has {} values, model dimension is {}", row.size(), dims));
        }
        for (Eigen::Index d = 0; d < dims; ++d) m.inputs(static_cast<Eigen::Index>(i), d) = row[static_cast<std::size_t>(d)];
    }
    return pair;
}

json model_payload(const MultiClassModel& model) {
    json pairs = json::array();
    for (const auto& pair : model.pairs) pairs.push_back(binary_to_json(pair));
    json payload = {
        {"classifier", to_string(model.kind)},
        {"class_labels", model.class_labels},
        {"dims", model.dims},
        {"pairs", std::move(pairs)},
    };
    if (model.standardizer) {
        payload["standardizer"] = {{"mean", model.standardizer->mean}, {"scale", model.standardizer->scale}};
    }
    return payload;
}

}  // namespace

std::string model_to_string(const MultiClassModel& model) {
    const json payload = model_payload(model);
    const json doc = {
        {"format", format_tag},
        {"version", model_format_version},
        {"checksum", to_hex(fnv1a64(payload.dump()))},
        {"model", payload},
    };
    return doc.dump(1) + "\n";
}

MultiClassModel model_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(fmt::format("model file is not valid JSON: {}", e.what()));
    }
    try {
        if (doc.at("format").get<std::string>() != format_tag) {
            throw FormatError("not a stripml model file");
        }
        const int version = doc.at("version").get<int>();
        if (version != model_format_version) {
            throw FormatError(fmt::format("unsupported model version {} (expected {})", version, model_format_version));
        }
        const json& payload = doc.at("model");
        const std::string expected = doc.at("checksum").get<std::string>();
        const std::string actual = to_hex(fnv1a64(payload.dump()));
        if (expected != actual) {
            throw FormatError(fmt::format("model checksum mismatch (stored {}, computed {})", expected, actual));
        }
        MultiClassModel model;
        model.kind = classifier_kind_from_string(payload.at("classifier").get<std::string>());
        model.class_labels = payload.at("class_labels").get<std::vector<std::string>>();
        model.dims = payload.at("dims").get<Eigen::Index>();
        if (payload.contains("standardizer")) {
            Standardizer s;
            s.mean = payload["standardizer"].at("mean").get<std::vector<double>>();
            s.scale = payload["standardizer"].at("scale").get<std::vector<double>>();
            if (static_cast<Eigen::Index>(s.mean.size()) != model.dims ||
                static_cast<Eigen::Index>(s.scale.size()) != model.dims) {
                throw FormatError("standardizer dimension does not match the model");
            }
            model.standardizer = std::move(s);
        }
        for (const auto& pair : payload.at("pairs")) model.pairs.push_back(binary_from_json(pair, model.kind, model.dims));
        const std::size_t k = model.class_labels.size();
        if (k < 2 || model.pairs.size() != k * (k - 1) / 2) {
            throw FormatError(fmt::format("model lists {} class pairs for {} classes", model.pairs.size(), k));
        }
        return model;
    } catch (const json::exception& e) {
        throw FormatError(fmt::format("malformed model file: {}", e.what()));
    } catch (const InvalidArgument& e) {
        throw FormatError(fmt::format("malformed model file: {}", e.what()));
    }
}

void save_model(const MultiClassModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(fmt::format("cannot write model '{}'", path.string()));
    out << model_to_string(model);
    if (!out) throw FormatError(fmt::format("cannot write model '{}'", path.string()));
}

MultiClassModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(fmt::format("cannot open model '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return model_from_string(buffer.str());
    } catch (const FormatError& e) {
        throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

}  // namespace stripml
