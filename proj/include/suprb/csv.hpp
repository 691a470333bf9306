#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "suprb/dataset.hpp"

namespace suprb {

struct CsvTable {
    std::vector<std::string> header; ///< empty when the file has none
    std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 style reader: quoted fields, doubled quotes, CRLF tolerated.
[[nodiscard]] CsvTable parse_csv(std::string_view text, bool has_header);
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path, bool has_header);

/// `target` is a header name or a zero-based column index.
[[nodiscard]] Dataset dataset_from_table(const CsvTable& table, const std::string& target);
[[nodiscard]] Dataset load_csv(const std::filesystem::path& path, const std::string& target, bool has_header);

/// Feature matrix for prediction. Columns are picked by name when the table
/// has a header and `feature_names` is non-empty, otherwise by position.
[[nodiscard]] Matrix features_from_table(const CsvTable& table, const std::vector<std::string>& feature_names,
                                         std::size_t dims);

} // namespace suprb
