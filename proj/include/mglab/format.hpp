#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mglab {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view text);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_escape(std::string_view field);
/// Splits one CSV document into records; quoted fields may span lines.
std::vector<std::vector<std::string>> csv_parse(std::string_view text);

/// FNV-1a 64-bit over the bytes, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace mglab
