#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wordladders::csv {

// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted
// and inner quotes doubled. Rows end with CRLF.
std::string escape(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

// Parses a whole document; accepts CRLF or LF line ends. Throws ParseError
// on an unterminated quoted field.
std::vector<std::vector<std::string>> parse(std::string_view document);

}  // namespace wordladders::csv
