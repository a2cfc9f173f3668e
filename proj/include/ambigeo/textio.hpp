#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ambigeo::textio {

/// Shortest-safe round-trip representation ("%.17g").
std::string format_double(double v);

/// JSON number, or the strings "inf" / "-inf" / "nan" for non-finite values
/// (JSON has no literal for them).
nlohmann::ordered_json json_number(double v);

std::string csv_field(std::string_view field);
/// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv(std::string_view line);

/// Reads a CSV with a header row. Blank lines are skipped; every record
/// must have the header's width.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, or -1.
    int column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

double parse_double(const std::string& text, std::string_view what);
long long parse_int(const std::string& text, std::string_view what);

}  // namespace ambigeo::textio
