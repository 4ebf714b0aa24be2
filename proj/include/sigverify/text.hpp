#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent number formatting and small tokenizing helpers shared by
// the file readers and writers.
namespace sigverify::text {

/// Shortest decimal representation that parses back to exactly `value`.
std::string format_double(double value);

/// Like format_double but always contains a decimal point or exponent ("0" -> "0.0").
std::string format_decimal(double value);

std::optional<double> parse_double(std::string_view token);
std::optional<std::int64_t> parse_int(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char sep);
std::vector<std::string_view> split_whitespace(std::string_view line);
std::string_view trim(std::string_view s);

/// Splits on '\n', dropping a trailing '\r' from each line. A final empty
/// line produced by a terminating newline is not returned.
std::vector<std::string_view> lines(std::string_view content);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace sigverify::text
