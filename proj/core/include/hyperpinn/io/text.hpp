#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hyperpinn::io {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
// Strict parse of the whole string; false on trailing garbage.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long& out);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary sibling and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hyperpinn::io
