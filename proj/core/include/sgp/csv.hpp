#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sgp::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// newlines. Blank trailing lines are dropped. Throws Error(unparseable_row)
/// on an unterminated quote.
std::vector<Row> parse(std::string_view content);

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

}  // namespace sgp::csv
