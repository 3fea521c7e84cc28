#ifndef PURPOSE_IO_H_
#define PURPOSE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace purpose::io {

// Reads a whole file; throws DataError naming the path when it cannot.
std::string read_file(const std::filesystem::path& path);

// Writes atomically enough for our purposes: truncate + write + flush check.
void write_file(const std::filesystem::path& path, std::string_view content);

// Splits on '\n', dropping a trailing '\r' from each line. A final empty
// line after the last newline is not reported.
std::vector<std::string_view> split_lines(std::string_view content);

std::vector<std::string_view> split(std::string_view text, char sep);

// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_whitespace(std::string_view text);

std::string_view trim(std::string_view text);

// Strict numeric parsing: the whole field must be consumed.
bool parse_double(std::string_view field, double& out);
bool parse_int64(std::string_view field, long long& out);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// Fixed notation with at least `min_decimals` decimals, extended until the
// printed value parses back to exactly `value`.
std::string format_fixed_roundtrip(double value, int min_decimals);

// "<source>:<line>: <message>"
std::string at_line(std::string_view source, std::size_t line, std::string_view message);

}  // namespace purpose::io

#endif  // PURPOSE_IO_H_
