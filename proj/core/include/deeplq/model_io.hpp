#pragma once

#include <string>

#include "deeplq/equivariance.hpp"
#include "deeplq/model.hpp"

namespace deeplq {

/// Parses a model document. Syntax errors and malformed fields raise
/// InputError; syntax errors carry a line and column. Dimension consistency
/// is left to validate_model.
TeamModel parse_model(const std::string& text);
TeamModel load_model(const std::string& path);

/// Inverse of parse_model (shared_set written 1-based).
std::string model_to_json(const TeamModel& model);
void save_model(const TeamModel& model, const std::string& path);

/// Joint LQ system: {"n", "dx", "du", "A", "B", "Q", "R"} with joint-size matrices.
LqSystem parse_lq_system(const std::string& text);
/// Transformation: {"F": matrix}; lift sizes come from the system.
Transformation parse_transformation(const std::string& text, int dx, int du);

std::string read_text_file(const std::string& path);

}  // namespace deeplq
