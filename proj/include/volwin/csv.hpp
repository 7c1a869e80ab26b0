#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace volwin {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Parses a full cell as a double; false on empty, `null`, or trailing garbage.
bool parse_double(std::string_view cell, double& out);

std::vector<std::string> split_csv_line(std::string_view line);
std::string trim(std::string_view s);

/// 64-bit FNV-1a, used for config hashes and seed derivation.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// Identity line written as the first `#` comment of every artifact.
struct Provenance {
    std::string config_hash = "0000000000000000";
    std::uint64_t seed = 0;

    [[nodiscard]] std::string comment_line() const;
};

/// Rows of a comma-separated table, skipping blank lines and `#` comments.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace volwin
