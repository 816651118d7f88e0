#include "sgp/rules.hpp"

#include <functional>
#include <optional>
#include <regex>
#include <set>
#include <unordered_map>

#include "sgp/error.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

std::string fact_key(const Triple& t) {
  return text::entity_key(t.subject) + '\x1f' + t.relation + '\x1f' + text::entity_key(t.object);
}

bool match_term(const Term& term, const std::string& value, bool is_relation, Bindings& bindings) {
  if (term.anonymous()) return true;
  const std::string key = is_relation ? text::canonical_relation(value) : text::entity_key(value);
  if (!term.variable) {
    return key == (is_relation ? text::canonical_relation(term.text) : text::entity_key(term.text));
  }
  auto it = bindings.find(term.text);
  if (it == bindings.end()) {
    bindings.emplace(term.text, value);
    return true;
  }
  return text::entity_key(it->second) == text::entity_key(value);
}

void collect_variables(const FactPattern& p, std::set<std::string>& out) {
  for (const Term* t : {&p.subject, &p.relation, &p.object}) {
    if (t->variable && !t->anonymous()) out.insert(t->text);
  }
}

std::string resolve(const Term& term, const Bindings& bindings) {
  if (!term.variable) return term.text;
  auto it = bindings.find(term.text);
  if (term.anonymous() || it == bindings.end()) {
    throw Error(Errc::validation, "unbound variable ?" + term.text);
  }
  return it->second;
}

}  // namespace

Term parse_term(std::string_view token) {
  const std::string_view t = text::trim(token);
  if (t.empty()) throw Error(Errc::validation, "empty term");
  if (t.front() == '?') return Term{std::string(t.substr(1)), true};
  return Term{std::string(t), false};
}

FactPattern parse_pattern(std::string_view input) {
  std::string_view s = text::trim(input);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw Error(Errc::validation, "pattern must be parenthesised: " + std::string(input));
  }
  s = s.substr(1, s.size() - 2);
  const auto first = s.find(',');
  const auto second = first == std::string_view::npos ? first : s.find(',', first + 1);
  if (second == std::string_view::npos) {
    throw Error(Errc::validation, "pattern needs three slots: " + std::string(input));
  }
  FactPattern p{parse_term(s.substr(0, first)), parse_term(s.substr(first + 1, second - first - 1)),
                parse_term(s.substr(second + 1))};
  if (!p.relation.variable) p.relation.text = text::canonical_relation(p.relation.text);
  return p;
}

Rule make_rule(std::vector<FactPattern> premises, FactPattern conclusion) {
  if (premises.empty()) throw Error(Errc::validation, "rule needs at least one premise");
  std::set<std::string> bound;
  for (const auto& p : premises) collect_variables(p, bound);
  for (const Term* t : {&conclusion.subject, &conclusion.relation, &conclusion.object}) {
    if (t->anonymous()) throw Error(Errc::validation, "anonymous variable in rule conclusion");
    if (t->variable && !bound.contains(t->text)) {
      throw Error(Errc::validation, "conclusion variable ?" + t->text + " does not occur in any premise");
    }
  }
  return Rule{std::move(premises), std::move(conclusion)};
}

Rule parse_rule(std::string_view line) {
  static const std::regex pattern(R"(^\s*IF\s+(.+?)\s+THEN\s+(\(.*\))\s*$)", std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(line.begin(), line.end(), m, pattern)) {
    throw Error(Errc::validation, "not a rule: " + std::string(line));
  }
  std::vector<FactPattern> premises;
  for (const auto& part : text::split(m[1].str(), '&')) premises.push_back(parse_pattern(part));
  return make_rule(std::move(premises), parse_pattern(m[2].str()));
}

std::vector<Rule> parse_rules(std::string_view input) {
  std::vector<Rule> rules;
  for (const auto& raw : text::split_lines(input)) {
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    rules.push_back(parse_rule(line));
  }
  return rules;
}

std::string to_text(const Term& term) { return term.variable ? "?" + term.text : term.text; }

std::string to_text(const FactPattern& p) {
  return "(" + to_text(p.subject) + ", " + to_text(p.relation) + ", " + to_text(p.object) + ")";
}

std::string to_text(const Rule& rule) {
  std::string out = "IF ";
  for (std::size_t i = 0; i < rule.premises.size(); ++i) {
    if (i > 0) out += " & ";
    out += to_text(rule.premises[i]);
  }
  return out + " THEN " + to_text(rule.conclusion);
}

bool match(const FactPattern& pattern, const Triple& fact, Bindings& bindings) {
  Bindings trial = bindings;
  if (!match_term(pattern.subject, fact.subject, false, trial) ||
      !match_term(pattern.relation, fact.relation, true, trial) ||
      !match_term(pattern.object, fact.object, false, trial)) {
    return false;
  }
  bindings = std::move(trial);
  return true;
}

Triple instantiate(const FactPattern& pattern, const Bindings& bindings) {
  return make_triple(resolve(pattern.subject, bindings), resolve(pattern.relation, bindings),
                     resolve(pattern.object, bindings));
}

std::string Derivation::answer(const FactPattern& goal) const {
  for (const Term* t : {&goal.subject, &goal.relation, &goal.object}) {
    if (t->variable && !t->anonymous()) return goal_bindings.at(t->text);
  }
  if (goal.subject.anonymous()) return goal_fact.subject;
  if (goal.relation.anonymous()) return goal_fact.relation;
  return goal_fact.object;
}

Derivation forward_chain(std::span<const Triple> facts, std::span<const Rule> rules, const FactPattern& goal,
                         const ChainOptions& options) {
  struct Known {
    Triple fact;
    std::size_t depth;
    std::optional<std::size_t> firing;
  };
  std::vector<Known> known;
  std::vector<Firing> firings;
  std::unordered_map<std::string, std::size_t> index;

  for (const auto& f : facts) {
    Triple t = make_triple(f.subject, f.relation, f.object);
    if (index.emplace(fact_key(t), known.size()).second) known.push_back({std::move(t), 0, std::nullopt});
  }
  for (const auto& k : known) {
    Bindings b;
    if (match(goal, k.fact, b)) return Derivation{{}, k.fact, std::move(b)};
  }

  auto proof_of = [&](std::size_t fact_index, Bindings goal_bindings) {
    Derivation d;
    d.goal_fact = known[fact_index].fact;
    d.goal_bindings = std::move(goal_bindings);
    std::set<std::size_t> emitted;
    std::function<void(std::size_t)> visit = [&](std::size_t at) {
      const auto& k = known[at];
      if (!k.firing || emitted.contains(*k.firing)) return;
      for (const auto& premise : firings[*k.firing].premises) visit(index.at(fact_key(premise)));
      emitted.insert(*k.firing);
      d.firings.push_back(firings[*k.firing]);
    };
    visit(fact_index);
    return d;
  };

  for (std::size_t round = 1;; ++round) {
    const std::size_t visible = known.size();  // facts of depth < round
    bool derived_any = false;

    for (std::size_t r = 0; r < rules.size(); ++r) {
      const Rule& rule = rules[r];
      std::vector<std::size_t> chosen;
      std::optional<Derivation> found;

      std::function<void(std::size_t, const Bindings&, bool)> join = [&](std::size_t p, const Bindings& b,
                                                                         bool uses_frontier) {
        if (found) return;
        if (p == rule.premises.size()) {
          if (!uses_frontier) return;
          Triple derived = instantiate(rule.conclusion, b);
          const std::string key = fact_key(derived);
          if (index.contains(key)) return;
          if (firings.size() >= options.max_firings) {
            throw Error(Errc::budget_exceeded,
                        "forward chaining exceeded " + std::to_string(options.max_firings) + " firings");
          }
          Firing firing{r, b, {}, derived, round};
          for (std::size_t i : chosen) firing.premises.push_back(known[i].fact);
          firings.push_back(std::move(firing));
          index.emplace(key, known.size());
          known.push_back({derived, round, firings.size() - 1});
          derived_any = true;
          Bindings goal_bindings;
          if (match(goal, derived, goal_bindings)) found = proof_of(known.size() - 1, std::move(goal_bindings));
          return;
        }
        for (std::size_t i = 0; i < visible && !found; ++i) {
          Bindings next = b;
          if (!match(rule.premises[p], known[i].fact, next)) continue;
          chosen.push_back(i);
          join(p + 1, next, uses_frontier || known[i].depth + 1 == round);
          chosen.pop_back();
        }
      };
      join(0, {}, false);
      if (found) return std::move(*found);
    }
    if (!derived_any) throw Error(Errc::unprovable, "goal " + to_text(goal) + " is not derivable");
  }
}

}  // namespace sgp
