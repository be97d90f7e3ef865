// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include "stripml/multiclass.hpp"

#include <filesystem>
#include <string>

namespace stripml {

inline constexpr int model_format_version = 1;

/// JSON document: {"format": "stripml-model", "version": 1, "checksum": hex,
/// "model": {...}}. The checksum is FNV-1a over the serialized "model" object.
/// Reals are written in shortest round-trip form, so a reloaded model gives
/// bit-identical decision values.
std::string model_to_string(const MultiClassModel& model);
MultiClassModel model_from_string(const std::string& text);

void save_model(const MultiClassModel& model, const std::filesystem::path& path);
MultiClassModel load_model(const std::filesystem::path& path);

}  // namespace stripml
