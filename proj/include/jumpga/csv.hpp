#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace jumpga::csv {

/// RFC-4180: fields containing comma, quote or newline are quoted, embedded
/// quotes doubled.
std::string escape_field(std::string_view field);

std::string make_row(const std::vector<std::string>& fields);

/// Parses an RFC-4180 document into rows of fields. Accepts LF and CRLF line
/// ends; a trailing newline does not produce an empty record.
std::vector<std::vector<std::string>> parse(std::string_view text);

} // namespace jumpga::csv
