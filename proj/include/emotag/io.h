#ifndef EMOTAG_IO_H_
#define EMOTAG_IO_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emotag {

// A recoverable problem with one input line.
struct LineIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

// Reads a whole file. Throws Error(kIo) when it cannot be opened.
std::string read_file(const std::string& path);

// Writes `content` to a temporary sibling of `path` and renames it into place,
// so readers never observe a partially written file.
void write_file_atomic(const std::string& path, std::string_view content);

// Splits on '\n', dropping a trailing '\r' from each line. A final line
// without a newline is kept; an empty trailing segment is not.
std::vector<std::string> split_lines(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

// Shortest decimal representation that parses back to the same double.
std::string format_real(double value);

// Full-string numeric parses; nullopt on any trailing garbage.
std::optional<double> parse_real(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

// Milliseconds since the Unix epoch for an ISO-8601 timestamp of the form
// YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]. A missing zone means UTC.
std::optional<std::int64_t> parse_iso8601(std::string_view text);

// Current UTC time as YYYY-MM-DDTHH:MM:SS.mmmZ.
std::string now_iso8601();

}  // namespace emotag

#endif  // EMOTAG_IO_H_
