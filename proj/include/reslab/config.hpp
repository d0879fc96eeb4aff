#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "reslab/scenario.hpp"

namespace reslab {

// JSON config: missing fields take the scenario defaults, unknown fields are
// rejected with a ConfigError naming the field.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string write_config(const ScenarioConfig& config);

}  // namespace reslab
