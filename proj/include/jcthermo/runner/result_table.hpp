// result_table.hpp: column-oriented output with CSV and JSON writers

#pragma once

#include "jcthermo/runner/config.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace jcthermo::runner {

using Cell = std::variant<double, long long, std::string>;

struct Column {
    std::string name;
    std::vector<Cell> cells;
};

struct ResultTable {
    std::vector<Column> columns;
    json metadata = json::object();

    Column& add_column(std::string name) {
        columns.push_back({std::move(name), {}});
        return columns.back();
    }

    const Column& column(std::string_view name) const {
        for (const auto& c : columns)
            if (c.name == name) return c;
        throw std::out_of_range("ResultTable: no column '" + std::string(name) + "'");
    }

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().cells.size(); }

    void check_shape() const {
        for (const auto& c : columns)
            if (c.cells.size() != rows())
                throw std::logic_error("ResultTable: column '" + c.name + "' has a different length");
    }
};

// Shortest round-trip text; scientific when 0 < |x| < 1e-4.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    const auto fmt = std::abs(x) < 1e-4 ? std::chars_format::scientific : std::chars_format::general;
    const auto res = std::to_chars(buf, buf + sizeof buf, x, fmt);
    return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

// Metadata as "# key: <compact json>" lines, then header, then rows.
inline void write_csv(std::ostream& os, const ResultTable& t) {
    t.check_shape();
    for (const auto& [key, value] : t.metadata.items()) os << "# " << key << ": " << value.dump() << '\n';
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j].name;
    os << '\n';
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << format_cell(t.columns[j].cells[i]);
        os << '\n';
    }
}

inline json table_to_json(const ResultTable& t) {
    t.check_shape();
    json cols = json::object();
    for (const auto& c : t.columns) {
        json arr = json::array();
        for (const auto& cell : c.cells) {
            if (const auto* d = std::get_if<double>(&cell)) {
                if (std::isfinite(*d)) arr.push_back(*d);
                else arr.push_back(nullptr);  // JSON has no NaN/inf
            } else if (const auto* i = std::get_if<long long>(&cell)) {
                arr.push_back(*i);
            } else {
                arr.push_back(std::get<std::string>(cell));
            }
        }
        cols[c.name] = std::move(arr);
    }
    return json{{"metadata", t.metadata}, {"columns", std::move(cols)}};
}

inline void write_table(std::ostream& os, const ResultTable& t, OutputFormat f) {
    if (f == OutputFormat::csv) write_csv(os, t);
    else os << table_to_json(t).dump(2) << '\n';
}

// The CSV body: everything after the metadata comment lines.
inline std::string csv_body(const std::string& csv) {
    std::size_t pos = 0;
    while (pos < csv.size() && csv[pos] == '#') {
        const auto nl = csv.find('\n', pos);
        if (nl == std::string::npos) return {};
        pos = nl + 1;
    }
    return csv.substr(pos);
}

}  // namespace jcthermo::runner
