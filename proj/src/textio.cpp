#include "ambigeo/textio.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>

#include "ambigeo/error.hpp"

namespace ambigeo::textio {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    if (quoted) throw Error(ErrorCode::Format, "unterminated quoted CSV field");
    fields.push_back(std::move(current));
    return fields;
}

int CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_csv(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw Error(ErrorCode::Format, "CSV line " + std::to_string(line_no) + " has " +
                                               std::to_string(fields.size()) + " fields, expected " +
                                               std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw Error(ErrorCode::Format, "CSV input has no header");
    return table;
}

double parse_double(const std::string& text, std::string_view what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw Error(ErrorCode::Format, "invalid number for " + std::string(what) + ": '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& text, std::string_view what) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw Error(ErrorCode::Format, "invalid integer for " + std::string(what) + ": '" + text + "'");
    }
    return v;
}

}  // namespace ambigeo::textio
