/**
 * @file io.hpp
 * @brief Delimited-text helpers shared by the file formats.
 */
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "snfsurrogate/errors.hpp"

namespace snf {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw DataError("cannot format number");
    return {buf, ptr};
}

inline double parse_double(std::string_view text, std::size_t line = 0) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ParseError("expected a number, got '" + std::string(text) + "'", line);
    return v;
}

inline std::uint64_t parse_u64(std::string_view text, std::size_t line = 0) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ParseError("expected an unsigned integer, got '" + std::string(text) + "'", line);
    return v;
}

inline std::vector<std::string> split_fields(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        std::string field(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        out.push_back(std::move(field));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

/// Comment line heading every emitted table.
inline std::string provenance_line(std::uint64_t seed) {
    return "# snfsurrogate " + std::string(kToolVersion) + " seed=" + std::to_string(seed) + "\n";
}

}  // namespace snf
