#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgp/kg.hpp"
#include "sgp/task.hpp"

// Regular-pattern parsing of model transcripts: triples grouped by numbered
// blocks, the final stated answer, and an audit comparing the two.
namespace sgp {

struct TripleBlock {
  std::size_t index = 0;  // 0 = before any numbered header, then 1, 2, ...
  std::vector<Triple> triples;
};

struct ParseDiagnostics {
  std::size_t skipped_lines = 0;  // triple-shaped lines that did not parse
  std::size_t blocks_found = 0;   // numbered headers seen
};

struct TripleExtraction {
  std::vector<TripleBlock> blocks;  // only blocks holding triples, increasing index
  ParseDiagnostics diagnostics;

  [[nodiscard]] std::vector<Triple> all() const;
};

/// Recognised line shapes, after an optional bullet ("-", "*", "•"), an
/// optional "N." header and an optional "t=N:" stamp:
///   (A, r, B)               one or more, optionally joined by "->"
///   A - r - B               dashed
///   A - r: B                attribute style
/// Lines such as "(C) The Odyssey" are option listings and are ignored.
/// Prose is ignored. Never throws.
TripleExtraction extract_triples(std::string_view text);

struct ParsedAnswer {
  AnswerKind kind = AnswerKind::entity;
  std::string value;     // "C", normalised entity/relation text, or a number
  std::string raw_span;  // the matched source text

  friend bool operator==(const ParsedAnswer&, const ParsedAnswer&) = default;
};

/// Last conclusion marker in the text wins. Markers: "option (X)",
/// "correct statement is (X)", "the answer is[:] X", "the missing relation
/// is 'X'", "A is B's <kinship label>", "conclude/infer that ... is X",
/// "In conclusion, ... is X", "Therefore, the ... is X", and a leading
/// "(X) ..." answer line. Throws Error(no_answer_found).
ParsedAnswer extract_final_answer(std::string_view text, AnswerKind kind_hint);
std::optional<ParsedAnswer> try_extract_final_answer(std::string_view text, AnswerKind kind_hint);

/// A fact pattern with exactly one empty slot; the slot is what the audit
/// reads off the transcript's triples.
struct AuditQuery {
  std::optional<std::string> subject;
  std::optional<std::string> relation;
  std::optional<std::string> object;
};

enum class ConsistencyStatus { consistent, inconsistent, inconclusive };
std::string_view to_string(ConsistencyStatus status) noexcept;

struct ConsistencyReport {
  ConsistencyStatus status = ConsistencyStatus::inconclusive;
  std::optional<ParsedAnswer> derived;
  std::optional<ParsedAnswer> stated;
  std::vector<std::string> evidence;
};

/// derived = missing slot of the last transcript triple matching the query;
/// stated = extract_final_answer. An option letter is compared through its
/// option text. Inconsistent only when both sides exist and disagree.
/// Throws Error(validation) when the query does not have exactly one gap.
ConsistencyReport audit_consistency(std::string_view text, const AuditQuery& query, AnswerKind kind_hint,
                                    std::span<const OptionChoice> options = {});

/// Whether two answers denote the same thing: kinship labels by kind (a
/// neutral label matches either gender), numbers numerically, otherwise
/// normalised text with leading articles dropped.
bool answers_equivalent(std::string_view a, std::string_view b, AnswerKind kind);

/// Letter of the option whose text equals `value` after normalisation, or
/// failing that the single option whose text contains it as whole words.
std::optional<std::string> resolve_option(std::span<const OptionChoice> options, std::string_view value,
                                          AnswerKind value_kind = AnswerKind::entity);

struct ParsedResponse {
  TripleExtraction graph;
  std::optional<ParsedAnswer> final_answer;
  std::vector<std::string> derivation_lines;  // non-empty lines that hold no triple
};

ParsedResponse parse_response(std::string_view text, AnswerKind kind_hint);

}  // namespace sgp
