#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

namespace ek {

inline constexpr const char* kVersion = "0.1.0";

// Shortest decimal that round-trips the double exactly.
std::string format_double(double v);
std::string csv_row(std::initializer_list<double> values);
std::string csv_row(const std::vector<double>& values);

// Writes to a sibling temp file and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Throws ConfigError unless the parent directory of path exists.
void require_writable_parent(const std::filesystem::path& path);

}  // namespace ek
