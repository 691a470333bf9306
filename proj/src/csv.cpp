#include "suprb/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "suprb/errors.hpp"

namespace suprb {

namespace {

std::vector<std::vector<std::string>> split_records(std::string_view text)
{
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // Blank lines carry no data.
        if (!(record.size() == 1 && record.front().empty())) {
            records.push_back(std::move(record));
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
        case '"':
            if (field_started) {
                throw DataError("stray quote inside unquoted CSV field");
            }
            quoted = true;
            field_started = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            break;
        default:
            field += ch;
            field_started = true;
        }
    }
    if (quoted) {
        throw DataError("unterminated quoted CSV field");
    }
    if (field_started || !field.empty() || !record.empty()) {
        end_record();
    }
    return records;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col)
{
    const auto text = trim(cell);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
        std::ostringstream msg;
        msg << "non-numeric value '" << cell << "' at data row " << row + 1 << ", column " << col + 1;
        throw DataError(msg.str());
    }
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "non-finite value '" << cell << "' at data row " << row + 1 << ", column " << col + 1;
        throw DataError(msg.str());
    }
    return value;
}

std::string join(const std::vector<std::string>& names)
{
    std::string out;
    for (const auto& n : names) {
        out += (out.empty() ? "" : ", ") + n;
    }
    return out;
}

std::size_t resolve_column(const CsvTable& table, const std::string& target, std::size_t width)
{
    if (!table.header.empty()) {
        const auto it = std::find(table.header.begin(), table.header.end(), target);
        if (it != table.header.end()) {
            return static_cast<std::size_t>(it - table.header.begin());
        }
    }
    std::size_t index = 0;
    const auto res = std::from_chars(target.data(), target.data() + target.size(), index);
    if (res.ec == std::errc{} && res.ptr == target.data() + target.size() && index < width) {
        return index;
    }
    if (!table.header.empty()) {
        throw DataError("target column '" + target + "' not found; available columns: " + join(table.header));
    }
    throw DataError("target column '" + target + "' is not a column index below " + std::to_string(width));
}

} // namespace

CsvTable parse_csv(std::string_view text, bool has_header)
{
    auto records = split_records(text);
    CsvTable table;
    if (has_header) {
        if (records.empty()) {
            throw DataError("CSV file has no header line");
        }
        table.header = std::move(records.front());
        for (auto& h : table.header) {
            h = std::string(trim(h));
        }
        records.erase(records.begin());
    }
    const std::size_t width = has_header ? table.header.size() : (records.empty() ? 0 : records.front().size());
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (records[r].size() != width) {
            std::ostringstream msg;
            msg << "ragged CSV: data row " << r + 1 << " has " << records[r].size() << " fields, expected " << width;
            throw DataError(msg.str());
        }
    }
    table.rows = std::move(records);
    return table;
}

CsvTable read_csv(const std::filesystem::path& path, bool has_header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open data file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), has_header);
}

Dataset dataset_from_table(const CsvTable& table, const std::string& target)
{
    if (table.rows.empty()) {
        throw DataError("CSV file has no data rows");
    }
    const std::size_t width = table.rows.front().size();
    if (width < 2) {
        throw DataError("CSV needs at least one feature column and a target column");
    }
    const std::size_t target_col = resolve_column(table, target, width);

    Matrix x(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(width - 1));
    Vector y(static_cast<Eigen::Index>(table.rows.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        Eigen::Index c_out = 0;
        for (std::size_t c = 0; c < width; ++c) {
            const double v = parse_cell(table.rows[r][c], r, c);
            if (c == target_col) {
                y[static_cast<Eigen::Index>(r)] = v;
            } else {
                x(static_cast<Eigen::Index>(r), c_out++) = v;
            }
        }
    }
    if (y.size() > 1 && (y.array() == y[0]).all()) {
        throw DataError("target column is constant");
    }

    std::vector<std::string> names;
    std::string target_name = table.header.empty() ? target : table.header[target_col];
    if (!table.header.empty()) {
        for (std::size_t c = 0; c < width; ++c) {
            if (c != target_col) {
                names.push_back(table.header[c]);
            }
        }
    }
    return Dataset(std::move(x), std::move(y), std::move(names), std::move(target_name));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target, bool has_header)
{
    return dataset_from_table(read_csv(path, has_header), target);
}

Matrix features_from_table(const CsvTable& table, const std::vector<std::string>& feature_names, std::size_t dims)
{
    std::vector<std::size_t> columns;
    if (!table.header.empty() && !feature_names.empty()) {
        for (const auto& name : feature_names) {
            const auto it = std::find(table.header.begin(), table.header.end(), name);
            if (it == table.header.end()) {
                throw DataError("feature column '" + name + "' not found; available columns: " + join(table.header));
            }
            columns.push_back(static_cast<std::size_t>(it - table.header.begin()));
        }
    } else {
        const std::size_t width = table.rows.empty() ? dims : table.rows.front().size();
        if (width != dims) {
            throw DataError("expected " + std::to_string(dims) + " feature columns, found " + std::to_string(width));
        }
        for (std::size_t c = 0; c < dims; ++c) {
            columns.push_back(c);
        }
    }

    Matrix x(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(dims));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_cell(table.rows[r][columns[c]], r, columns[c]);
        }
    }
    return x;
}

} // namespace suprb
