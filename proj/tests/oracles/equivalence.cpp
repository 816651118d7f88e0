#include "equivalence.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sgp/error.hpp"
#include "sgp/kg.hpp"
#include "sgp/kinship.hpp"
#include "sgp/rules.hpp"
#include "sgp/strategies.hpp"

namespace sgp::oracle {

namespace {

constexpr std::size_t kKeptExamples = 5;

const std::vector<std::string>& people_names() {
  static const std::vector<std::string> names{"Alice", "Bob", "Claire", "Dave", "Eve", "Fred", "Gertrude"};
  return names;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

Term term_of(const std::string& s) {
  if (!s.empty() && s.front() == '?') return Term{s.substr(1), true};
  return Term{s, false};
}

FactPattern pattern_of(const Fact& f) {
  return {term_of(std::get<0>(f)), term_of(std::get<1>(f)), term_of(std::get<2>(f))};
}

Fact fact_of(const Triple& t) { return {t.subject, t.relation, t.object}; }

std::string describe(const Fact& f) {
  return "(" + std::get<0>(f) + ", " + std::get<1>(f) + ", " + std::get<2>(f) + ")";
}

}  // namespace

void Sweep::fail(std::string what) {
  ++mismatches;
  if (examples.size() < kKeptExamples) examples.push_back(std::move(what));
}

Sweep sweep_dynamic(std::uint64_t seed, std::size_t sequences) {
  std::mt19937_64 rng(seed);
  Sweep sweep;
  constexpr std::size_t kSizes[] = {3, 5, 7};
  for (std::size_t s = 0; s < sequences; ++s) {
    const std::size_t n = kSizes[s % 3];
    std::vector<std::string> holdings;
    KnowledgeGraph kg(std::set<std::string>{"has"});
    for (std::size_t i = 0; i < n; ++i) {
      holdings.push_back("item " + std::to_string(s) + "-" + std::to_string(i));
      kg.add(make_triple(people_names()[i], "has", holdings.back()));
    }
    std::vector<std::pair<std::size_t, std::size_t>> swaps;
    std::vector<Event> events;
    const std::size_t length = pick(rng, 2 * n + 1);
    for (std::size_t k = 0; k < length; ++k) {
      const std::size_t i = pick(rng, n);
      std::size_t j = pick(rng, n - 1);
      if (j >= i) ++j;
      swaps.emplace_back(i, j);
      events.emplace_back(Swap{people_names()[i], people_names()[j], "has"});
    }
    const std::size_t queried = pick(rng, n);
    const std::string expected = replay_swaps(holdings, swaps)[queried];
    ++sweep.cases;
    try {
      const std::string got = track_dynamic(kg, events, {people_names()[queried], "has"});
      if (got != expected) sweep.fail("sequence " + std::to_string(s) + ": got " + got + ", want " + expected);
    } catch (const Error& e) {
      sweep.fail("sequence " + std::to_string(s) + ": " + e.what());
    }
  }
  return sweep;
}

Sweep sweep_sorting(std::uint64_t seed, std::size_t problems) {
  std::mt19937_64 rng(seed);
  Sweep sweep;
  for (std::size_t p = 0; p < problems; ++p) {
    const std::size_t n = 2 + p % 6;
    std::vector<std::string> objects;
    for (std::size_t i = 0; i < n; ++i) objects.push_back("object" + std::to_string(i));
    std::vector<std::size_t> hidden(n);
    for (std::size_t i = 0; i < n; ++i) hidden[i] = i;
    std::shuffle(hidden.begin(), hidden.end(), rng);
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[hidden[i]] = i;

    auto random_constraint = [&] {
      PlainConstraint c;
      c.a = pick(rng, n);
      switch (pick(rng, 4)) {
        case 0:
          c.b = pick(rng, n - 1);
          if (c.b >= c.a) ++c.b;
          c.kind = pos[c.a] < pos[c.b] ? ConstraintKind::left_of : ConstraintKind::right_of;
          break;
        case 1:
          c.a = hidden.front();
          c.kind = ConstraintKind::leftmost;
          break;
        case 2:
          c.a = hidden.back();
          c.kind = ConstraintKind::rightmost;
          break;
        default:
          c.kind = ConstraintKind::at;
          c.b = pos[c.a];
          break;
      }
      return c;
    };
    std::vector<PlainConstraint> plain;
    const std::size_t base = 1 + pick(rng, n);
    for (std::size_t k = 0; k < base; ++k) plain.push_back(random_constraint());
    // Half of the problems are driven to a unique order.
    if (p % 2 == 0) {
      while (all_orders(n, plain).size() > 1) plain.push_back(random_constraint());
    }
    const auto orders = all_orders(n, plain);

    std::vector<OrderConstraint> constraints;
    for (const auto& c : plain) {
      switch (c.kind) {
        case ConstraintKind::left_of: constraints.push_back(OrderConstraint::left_of(objects[c.a], objects[c.b])); break;
        case ConstraintKind::right_of: constraints.push_back(OrderConstraint::right_of(objects[c.a], objects[c.b])); break;
        case ConstraintKind::leftmost: constraints.push_back(OrderConstraint::leftmost(objects[c.a])); break;
        case ConstraintKind::rightmost: constraints.push_back(OrderConstraint::rightmost(objects[c.a])); break;
        case ConstraintKind::at: constraints.push_back(OrderConstraint::at(objects[c.a], c.b)); break;
      }
    }
    ++sweep.cases;
    const std::string where = "problem " + std::to_string(p) + " (n=" + std::to_string(n) + ")";
    try {
      const auto got = sort_order(objects, constraints);
      if (orders.size() != 1) {
        sweep.fail(where + ": returned an order, but " + std::to_string(orders.size()) + " satisfy");
        continue;
      }
      std::vector<std::string> want;
      for (std::size_t i : orders.front()) want.push_back(objects[i]);
      if (got != want) sweep.fail(where + ": wrong order");
    } catch (const Error& e) {
      const bool expected = (orders.empty() && e.code() == Errc::inconsistent) ||
                            (orders.size() > 1 && e.code() == Errc::underdetermined);
      if (!expected) sweep.fail(where + ": " + e.what() + " with " + std::to_string(orders.size()) + " orders");
    }
  }
  return sweep;
}

Sweep sweep_rules(std::uint64_t seed, std::size_t systems, std::size_t max_rules) {
  std::mt19937_64 rng(seed);
  Sweep sweep;
  const std::vector<std::string> entities{"e0", "e1", "e2", "e3", "e4"};
  const std::vector<std::string> relations{"r0", "r1", "r2", "r3"};
  const std::vector<std::string> variables{"?x", "?y", "?z"};

  for (std::size_t s = 0; s < systems; ++s) {
    std::vector<Fact> facts;
    const std::size_t fact_count = 2 + pick(rng, 6);
    for (std::size_t i = 0; i < fact_count; ++i) {
      facts.emplace_back(entities[pick(rng, 5)], relations[pick(rng, 4)], entities[pick(rng, 5)]);
    }
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());

    std::vector<PlainRule> plain;
    const std::size_t rule_count = 1 + pick(rng, max_rules);
    for (std::size_t r = 0; r < rule_count; ++r) {
      PlainRule rule;
      std::vector<std::string> bound;
      auto slot = [&] {
        if (pick(rng, 3) == 0) return entities[pick(rng, 5)];
        const std::string v = variables[pick(rng, 3)];
        bound.push_back(v);
        return v;
      };
      const std::size_t premises = 1 + pick(rng, 2);
      for (std::size_t k = 0; k < premises; ++k) {
        const std::string subject = slot();
        const std::string relation = relations[pick(rng, 4)];
        rule.premises.emplace_back(subject, relation, slot());
      }
      auto head_slot = [&] {
        if (bound.empty() || pick(rng, 4) == 0) return entities[pick(rng, 5)];
        return bound[pick(rng, bound.size())];
      };
      const std::string subject = head_slot();
      rule.conclusion = Fact{subject, relations[pick(rng, 4)], head_slot()};
      plain.push_back(std::move(rule));
    }
    const Fact goal = pick(rng, 2) == 0 ? Fact{entities[pick(rng, 5)], relations[pick(rng, 4)], "?g"}
                                        : Fact{entities[pick(rng, 5)], relations[pick(rng, 4)], entities[pick(rng, 5)]};
    const bool provable = any_match(naive_closure(facts, plain), goal);

    std::vector<Triple> triples;
    for (const auto& [a, r, b] : facts) triples.push_back(make_triple(a, r, b));
    std::vector<Rule> rules;
    for (const auto& p : plain) {
      std::vector<FactPattern> premises;
      for (const auto& f : p.premises) premises.push_back(pattern_of(f));
      rules.push_back(make_rule(std::move(premises), pattern_of(p.conclusion)));
    }

    ++sweep.cases;
    const std::string where = "system " + std::to_string(s) + " goal " + describe(goal);
    try {
      const Derivation d = forward_chain(triples, rules, pattern_of(goal));
      if (!provable) {
        sweep.fail(where + ": proved, but the closure lacks it");
        continue;
      }
      // Replay the proof: every premise is known before it is used.
      std::set<Fact> known(facts.begin(), facts.end());
      bool valid = true;
      for (const auto& firing : d.firings) {
        if (firing.rule >= plain.size()) {
          valid = false;
          break;
        }
        const PlainRule& rule = plain[firing.rule];
        for (std::size_t k = 0; k < firing.premises.size(); ++k) {
          valid = valid && known.contains(fact_of(firing.premises[k])) && k < rule.premises.size() &&
                  any_match({fact_of(firing.premises[k])}, rule.premises[k]);
        }
        valid = valid && firing.premises.size() == rule.premises.size() &&
                any_match({fact_of(firing.derived)}, rule.conclusion);
        known.insert(fact_of(firing.derived));
      }
      valid = valid && known.contains(fact_of(d.goal_fact)) && any_match({fact_of(d.goal_fact)}, goal);
      if (!valid) sweep.fail(where + ": proof does not replay");
    } catch (const Error& e) {
      if (provable || e.code() != Errc::unprovable) sweep.fail(where + ": " + e.what());
    }
  }
  return sweep;
}

Sweep sweep_kinship(std::uint64_t seed, std::size_t trees, std::size_t max_people) {
  std::mt19937_64 rng(seed);
  Sweep sweep;
  for (std::size_t t = 0; t < trees; ++t) {
    const Family family = random_family(rng, max_people);
    KnowledgeGraph kg;
    for (const auto& [x, label, y] : family_facts(family)) kg.add(make_triple(x, label, y));
    for (std::size_t a = 0; a < family.people.size(); ++a) {
      for (std::size_t b = 0; b < family.people.size(); ++b) {
        if (a == b) continue;
        const auto truth = relation_kind(family, a, b);
        const Person& pa = family.people[a];
        const Person& pb = family.people[b];
        const std::string where = "tree " + std::to_string(t) + ": " + pb.name + " is " + pa.name + "'s ";
        ++sweep.cases;
        try {
          const KinshipRelation got = infer_relation(kg, pb.name, pa.name);
          if (!truth) {
            sweep.fail(where + got.label() + ", but no label fits");
          } else if (got.label() != gendered_label(*truth, pb.male)) {
            sweep.fail(where + got.label() + ", want " + gendered_label(*truth, pb.male));
          }
        } catch (const Error& e) {
          if (truth || e.code() != Errc::undefined_composition) {
            sweep.fail(where + "? " + e.what() + (truth ? ", want " + *truth : ""));
          }
        }
      }
    }
  }
  return sweep;
}

}  // namespace sgp::oracle
