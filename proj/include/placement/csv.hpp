#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace placement::csv {

/// Splits one line on commas. Fields may be double-quoted; a doubled quote
/// inside a quoted field is an escaped quote.
std::vector<std::string> split_line(std::string_view line);

/// Reads the next non-empty line, stripping a trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);
std::string format_fixed(double v, int decimals);

bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, std::int64_t& out);

}  // namespace placement::csv
