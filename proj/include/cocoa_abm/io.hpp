#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cocoa_abm {

// Shortest round-trip-ish formatting ("%.12g"): stable across platforms for
// the value ranges used here, no trailing zero noise in CSV output.
std::string format_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

std::string read_file(const std::filesystem::path& path);

// Write to a sibling temp file then rename, so readers never observe a
// half-written file and an interrupted sweep leaves no torn scenario CSVs.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace cocoa_abm
