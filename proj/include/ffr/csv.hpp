#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace ffr {

using CsvValue = std::variant<long, double, std::string>;

// Numbers are printed with 12 significant digits so a round-trip parse of the
// file reproduces them.
inline std::string format_csv_value(const CsvValue& v) {
    if (const long* i = std::get_if<long>(&v)) return std::to_string(*i);
    if (const double* d = std::get_if<double>(&v)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", *d);
        return buf;
    }
    return std::get<std::string>(v);
}

inline void emit_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<CsvValue>>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("csv row width does not match header: " + path);
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_csv_value(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ffr
