// table.hpp: column tables with CSV and JSON writers.

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace tfjc::cli {

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Twelve significant digits.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string cell_text(const Cell& c) {
    struct V {
        std::string operator()(double d) const { return format_double(d); }
        std::string operator()(long long i) const { return std::to_string(i); }
        std::string operator()(bool b) const { return b ? "1" : "0"; }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(V{}, c);
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_quote(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_quote(cell_text(row[i]));
        os << "\n";
    }
}

/// Array of row objects. Doubles go through the same 12-digit formatting as CSV.
inline void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            const auto& c = row[i];
            if (const auto* d = std::get_if<double>(&c)) {
                if (std::isfinite(*d))
                    obj[t.columns[i]] = std::stod(format_double(*d));
                else
                    obj[t.columns[i]] = format_double(*d);
            } else if (const auto* n = std::get_if<long long>(&c)) {
                obj[t.columns[i]] = *n;
            } else if (const auto* b = std::get_if<bool>(&c)) {
                obj[t.columns[i]] = *b;
            } else {
                obj[t.columns[i]] = std::get<std::string>(c);
            }
        }
        arr.push_back(std::move(obj));
    }
    os << arr.dump(1) << "\n";
}

inline void write_table(std::ostream& os, const Table& t, const std::string& format) {
    if (format == "json")
        write_json(os, t);
    else
        write_csv(os, t);
}

}  // namespace tfjc::cli
