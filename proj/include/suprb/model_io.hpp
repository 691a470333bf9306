#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "suprb/training.hpp"

namespace suprb {

inline constexpr int kModelFormatVersion = 1;

[[nodiscard]] std::string serialize_model(const Model& model);
/// Throws DataError on malformed text, schema violations or a version mismatch.
[[nodiscard]] Model deserialize_model(std::string_view text);

void save_model(const Model& model, const std::filesystem::path& path);
[[nodiscard]] Model load_model(const std::filesystem::path& path);

} // namespace suprb
