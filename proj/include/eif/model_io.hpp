#pragma once

#include <string>

#include "eif/evaluation.hpp"

namespace eif {

inline constexpr int kModelFormatVersion = 1;

std::string forest_to_json(const Forest& forest);
std::string forest_to_json(const RotatedForest& forest);
std::string model_to_json(const Model& model);

/// Parses and validates a model document. Throws unsupported_version or
/// corrupt_model naming the first violation found.
Model model_from_json(const std::string& text);

void save_forest(const Model& model, const std::string& path);
void save_forest(const Forest& forest, const std::string& path);
void save_forest(const RotatedForest& forest, const std::string& path);
Model load_forest(const std::string& path);

} // namespace eif
