#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by every module. ASCII-only case folding is
// intentional: entity and relation labels in the benchmarks are ASCII.
namespace sgp::text {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);
std::string join(std::span<const std::string> parts, std::string_view sep);
bool iequals(std::string_view a, std::string_view b) noexcept;
bool starts_with_icase(std::string_view s, std::string_view prefix) noexcept;
std::string replace_all(std::string s, std::string_view from, std::string_view to);

/// Relation labels: "\_" and "_" become spaces, camelCase is split
/// ("hasSon" -> "has son"), then lowercased with whitespace collapsed.
std::string canonical_relation(std::string_view relation);

/// Case-insensitive identity of an entity name (trimmed, lowercased,
/// whitespace collapsed). Display forms are kept separately.
std::string entity_key(std::string_view entity);

/// Answer normalization used by the parser, the audit and the scorer:
/// strips surrounding quotes and punctuation, underscores become spaces,
/// lowercases and collapses whitespace.
std::string normalize_answer(std::string_view s);

/// normalize_answer plus removal of leading articles (a, an, the).
std::string normalize_entity(std::string_view s);

/// Units that may trail a numeric literal ("13 kg").
inline constexpr std::string_view kNumericUnits[] = {"cm", "kg"};

/// Number words accepted as literals; index is the value.
inline constexpr std::string_view kNumberWords[] = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};

/// A literal is numeric iff, after trimming and removing one trailing unit
/// from kNumericUnits, it parses completely as a decimal number or is one of
/// kNumberWords (case-insensitive).
std::optional<double> parse_numeric_literal(std::string_view s);

/// Shortest decimal text that round-trips ("0.5", "0.39", "3").
std::string format_number(double value);

}  // namespace sgp::text
