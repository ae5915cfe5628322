#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fieldmap::csv {

// RFC 4180 quoting, only applied when the field needs it.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Splits one CSV record. Quoted fields may not span lines. Throws
// Error{Parse} on an unterminated quote.
std::vector<std::string> split_line(std::string_view line);

// Reads the next non-empty line, stripping a trailing CR. Returns nullopt
// at end of stream.
std::optional<std::string> next_line(std::istream& in, std::size_t& line_no);

// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

}  // namespace fieldmap::csv
