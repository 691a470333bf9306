#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "suprb/training.hpp"

namespace suprb {

/// Parses flat `dotted.key = value` text. Blank lines and `#` comments are
/// ignored. Unknown keys and constraint violations throw UsageError.
[[nodiscard]] TrainingConfig parse_config(std::string_view text);
[[nodiscard]] TrainingConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, in a fixed order. Reals use the shortest
/// decimal form that reads back to the same value.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> config_entries(const TrainingConfig& config);
[[nodiscard]] std::string format_config(const TrainingConfig& config);

} // namespace suprb
