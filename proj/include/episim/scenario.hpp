#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "episim/simulation.hpp"

namespace episim {

/// Parses a scenario document: one `section.key = value` per line, `#`
/// starts a comment, lists are comma-separated. Every key has a default, so
/// an empty document yields the default config. Unknown keys, bad values and
/// failed validation throw ValidationError carrying the key path.
ScenarioConfig parse_scenario(std::string_view text);

/// Throws IoError when the file cannot be read.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Every key with its current value; parse_scenario(format_scenario(c)) == c.
std::string format_scenario(const ScenarioConfig& config);

}  // namespace episim
