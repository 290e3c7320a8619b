#pragma once

#include <string>

#include "srz/domain.hpp"

namespace srz {

struct ConfigLoadResult {
  SimConfig config;
  ValidationResult validation;  // parse problems and invariant violations
};

// Parse "key = value" lines (# comments, blank lines allowed). Keys are
// the SimConfig field paths (e.g. geometry.v_srz, control.u_min, volume).
// Unknown keys fail closed as validation errors.
ConfigLoadResult parse_config(const std::string& text);

ConfigLoadResult load_config_file(const std::string& path);

// Serialization; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const SimConfig& config);

}  // namespace srz
