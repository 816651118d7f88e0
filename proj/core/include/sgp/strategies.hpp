#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgp/kg.hpp"
#include "sgp/kinship.hpp"
#include "sgp/rules.hpp"

// Deterministic navigation strategies for the task families. All functions
// are pure; failures are reported as sgp::Error.
namespace sgp {

// ---------------------------------------------------------------------------
// Entity prediction over a dynamic graph

struct DynamicQuery {
  std::string entity;
  std::string relation;
};

struct DynamicTrace {
  DynamicSeries series;
  std::string answer;
};

/// Replays `events` over `initial` and reads the single current value of the
/// query. Error(invalid_event) names the failing 1-based step and carries it
/// in details()[0]; zero or several values answer Unanswerable / Ambiguous.
DynamicTrace trace_dynamic(const KnowledgeGraph& initial, std::span<const Event> events, const DynamicQuery& query);
std::string track_dynamic(const KnowledgeGraph& initial, std::span<const Event> events, const DynamicQuery& query);

// ---------------------------------------------------------------------------
// Complex (multi-hop) entity prediction

struct ChainHop {
  std::string relation;
  Direction direction = Direction::forward;
};

struct ChainQuery {
  std::string anchor;
  std::vector<ChainHop> hops;
};

/// Entities visited: anchor first, then one entry per hop.
std::vector<std::string> trace_chain(const KnowledgeGraph& kg, const ChainQuery& query);
std::string resolve_chain(const KnowledgeGraph& kg, const ChainQuery& query);

// ---------------------------------------------------------------------------
// Graph sorting

struct OrderConstraint {
  enum class Kind { left_of, right_of, leftmost, rightmost, at_position };

  Kind kind = Kind::leftmost;
  std::string a;
  std::string b;          // binary kinds only
  std::size_t index = 0;  // at_position only, 0 = leftmost

  static OrderConstraint left_of(std::string a, std::string b) { return {Kind::left_of, std::move(a), std::move(b)}; }
  static OrderConstraint right_of(std::string a, std::string b) { return {Kind::right_of, std::move(a), std::move(b)}; }
  static OrderConstraint leftmost(std::string a) { return {Kind::leftmost, std::move(a), {}}; }
  static OrderConstraint rightmost(std::string a) { return {Kind::rightmost, std::move(a), {}}; }
  static OrderConstraint at(std::string a, std::size_t i) { return {Kind::at_position, std::move(a), {}, i}; }

  friend bool operator==(const OrderConstraint&, const OrderConstraint&) = default;
};

/// "left_of(a, b)", "right_of(a, b)", "leftmost(a)", "rightmost(a)", "at(a, 1)".
std::string to_text(const OrderConstraint& c);
OrderConstraint parse_constraint(std::string_view line);

struct SortProblem {
  std::vector<std::string> objects;
  std::vector<OrderConstraint> constraints;
};

/// Text form: a line "objects: a, b, c" followed by one constraint per line.
/// Blank lines and lines starting with '#' are ignored.
SortProblem parse_sort_problem(std::string_view text);

/// Whether `order` satisfies every constraint.
bool satisfies(std::span<const std::string> order, std::span<const OrderConstraint> constraints);

/// Every order satisfying the constraints (at most `limit`), in
/// lexicographic order of object indexes.
std::vector<std::vector<std::string>> enumerate_orders(std::span<const std::string> objects,
                                                       std::span<const OrderConstraint> constraints,
                                                       std::size_t limit = 10000);

/// The unique satisfying order. Throws Error(inconsistent) on a precedence
/// cycle or no solution, Error(underdetermined) with the candidate orders
/// (comma-joined, one per detail) when several remain, Error(validation) on
/// malformed constraints.
std::vector<std::string> sort_order(std::span<const std::string> objects, std::span<const OrderConstraint> constraints);

// ---------------------------------------------------------------------------
// Graph query

enum class Comparator { lt, gt, eq, ne, le, ge };

struct Conjunct {
  std::string attribute;
  Comparator cmp = Comparator::eq;
  std::string value;
};

struct Projection {
  enum class Kind { count, set, arg_sort_last, arg_sort_first };
  Kind kind = Kind::count;
  std::string attribute;  // arg_sort_* only
};

/// Candidates are subjects of (x, "is a", of_class) when of_class is set,
/// otherwise every subject in the graph. The pseudo-attribute "name" is the
/// subject's display name.
struct FilterPredicate {
  std::optional<std::string> of_class;
  std::vector<Conjunct> conjuncts;
  Projection projection;
};

struct QueryResult {
  Projection::Kind kind = Projection::Kind::count;
  std::size_t count = 0;
  std::vector<std::string> entities;  // matches, or the single arg-sort pick

  /// "3", "Louis, Gwen" or "Vincent".
  [[nodiscard]] std::string text() const;
};

/// "age>5", "weight >= 12", "name != Louis". Throws Error(validation).
Conjunct parse_conjunct(std::string_view text);

/// "count", "set", "last:name", "first:age".
Projection parse_projection(std::string_view text);

std::string_view to_string(Comparator cmp) noexcept;

/// Throws Error(missing_attribute) with details {subject, attribute}.
QueryResult run_graph_query(const KnowledgeGraph& kg, const FilterPredicate& predicate);

/// One row per subject: (row[key], column, cell) for every other column and
/// (row[key], "is a", row_class) when row_class is non-empty. Header names are
/// lowercased with any parenthesised unit dropped ("height (cm)" -> "height").
KnowledgeGraph graph_from_table(std::string_view csv_text, std::string_view row_class = "",
                                std::string_view key_column = "name");

}  // namespace sgp
