#pragma once

#include <string>
#include <vector>

#include "asbq/config.hpp"

namespace asbq {

/// Names of all presets, full-resolution ones followed by their "_desk"
/// variants.
std::vector<std::string> preset_names();

/// Fully explicit configuration of a named preset; throws ConfigError for an
/// unknown name. Output goes to "out/<name>" unless changed afterwards.
ExperimentConfig preset(const std::string& name);

}  // namespace asbq
