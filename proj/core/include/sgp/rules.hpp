#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgp/kg.hpp"

namespace sgp {

/// A pattern slot: a constant, a named variable "?x", or the anonymous "?".
struct Term {
  std::string text;  // variable name without '?', or the constant
  bool variable = false;

  [[nodiscard]] bool anonymous() const noexcept { return variable && text.empty(); }
  friend bool operator==(const Term&, const Term&) = default;
};

struct FactPattern {
  Term subject;
  Term relation;
  Term object;

  friend bool operator==(const FactPattern&, const FactPattern&) = default;
};

/// Every named conclusion variable occurs in some premise (checked by
/// make_rule / parse_rule).
struct Rule {
  std::vector<FactPattern> premises;
  FactPattern conclusion;

  friend bool operator==(const Rule&, const Rule&) = default;
};

using Bindings = std::map<std::string, std::string>;

Term parse_term(std::string_view token);
FactPattern parse_pattern(std::string_view text);
/// "IF (p) & (p) THEN (p)". Throws Error(validation).
Rule parse_rule(std::string_view line);
/// One rule per line; blank lines and '#' comments skipped.
std::vector<Rule> parse_rules(std::string_view text);
Rule make_rule(std::vector<FactPattern> premises, FactPattern conclusion);

std::string to_text(const Term& term);
std::string to_text(const FactPattern& pattern);
std::string to_text(const Rule& rule);

/// Relation compared canonically, entities case-insensitively. Extends
/// `bindings` on success; leaves it untouched on failure.
bool match(const FactPattern& pattern, const Triple& fact, Bindings& bindings);

/// Instantiates a pattern whose named variables are all bound.
Triple instantiate(const FactPattern& pattern, const Bindings& bindings);

struct Firing {
  std::size_t rule = 0;
  Bindings bindings;
  std::vector<Triple> premises;
  Triple derived;
  std::size_t round = 0;  // 1-based; a fact from round r has depth r
};

struct Derivation {
  std::vector<Firing> firings;  // premises always precede their use
  Triple goal_fact;
  Bindings goal_bindings;

  /// Binding of the goal's first named variable; the goal fact's object when
  /// the goal is ground.
  [[nodiscard]] std::string answer(const FactPattern& goal) const;
};

struct ChainOptions {
  std::size_t max_firings = 10000;  // new facts derived before BudgetExceeded
};

/// Semi-naive forward chaining. Round r fires every rule instantiation that
/// uses at least one fact of depth r-1 and no fact of depth r, in rule order
/// then fact order. Stops at the first round that derives a fact matching
/// the goal and returns that fact's proof (a minimal-depth derivation).
/// A goal already among the facts yields a zero-firing derivation.
/// Throws Error(unprovable) at fixpoint, Error(budget_exceeded) past the cap.
Derivation forward_chain(std::span<const Triple> facts, std::span<const Rule> rules, const FactPattern& goal,
                         const ChainOptions& options = {});

}  // namespace sgp
