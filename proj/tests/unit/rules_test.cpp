#include <gtest/gtest.h>

#include "sgp/error.hpp"
#include "sgp/rules.hpp"

namespace {

using namespace sgp;

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no sgp::Error thrown";
  return Errc::io;
}

TEST(Rules, TermsDistinguishVariables) {
  EXPECT_EQ(parse_term("?x"), (Term{"x", true}));
  EXPECT_TRUE(parse_term("?").anonymous());
  EXPECT_EQ(parse_term(" ice cube "), (Term{"ice cube", false}));
}

TEST(Rules, RuleTextRoundTrips) {
  const auto r = parse_rule("IF (?x, is placed in, sunlight) & (?x, is made of, ice) THEN (?x, absorbs, solar energy)");
  ASSERT_EQ(r.premises.size(), 2u);
  EXPECT_EQ(r.conclusion.object, (Term{"solar energy", false}));
  EXPECT_EQ(parse_rule(to_text(r)), r);
}

TEST(Rules, UnboundConclusionVariableIsRejected) {
  EXPECT_EQ(code_of([] { parse_rule("IF (?x, r, y) THEN (?x, s, ?z)"); }), Errc::validation);
  EXPECT_EQ(code_of([] { parse_rule("(?x, r, y) THEN (?x, s, y)"); }), Errc::validation);
  EXPECT_EQ(code_of([] { parse_pattern("(a, b)"); }), Errc::validation);
}

TEST(Rules, ParseRulesSkipsCommentsAndBlanks) {
  const auto rules = parse_rules("# heat\n\nIF (?x, r, y) THEN (?x, s, y)\nIF (?x, s, y) THEN (?x, t, y)\n");
  EXPECT_EQ(rules.size(), 2u);
}

TEST(Rules, MatchBindsConsistently) {
  const auto p = parse_pattern("(?x, likes, ?x)");
  Bindings b;
  EXPECT_FALSE(match(p, make_triple("Ann", "likes", "Bob"), b));
  EXPECT_TRUE(b.empty());
  EXPECT_TRUE(match(p, make_triple("Ann", "likes", "ann"), b));
  EXPECT_EQ(b.at("x"), "Ann");
  // Relations compare canonically.
  Bindings c;
  EXPECT_TRUE(match(parse_pattern("(?a, is_made_of, ice)"), make_triple("cube", "is made of", "Ice"), c));
  EXPECT_EQ(instantiate(parse_pattern("(?a, melts, ?a)"), c), make_triple("cube", "melts", "cube"));
}

TEST(ForwardChain, IceCubeNeedsThreeRounds) {
  const std::vector<Triple> facts{make_triple("ice cube", "is placed in", "sunlight"),
                                  make_triple("ice cube", "is made of", "ice")};
  const auto rules = parse_rules(
      "IF (?x, is placed in, sunlight) THEN (?x, absorbs, solar energy)\n"
      "IF (?x, absorbs, solar energy) & (?x, is made of, ice) THEN (?x, changes from solid to, liquid)\n"
      "IF (?x, changes from solid to, liquid) THEN (?x, undergoes, melting)\n");
  const auto goal = parse_pattern("(ice cube, undergoes, ?p)");
  const auto d = forward_chain(facts, rules, goal);
  EXPECT_EQ(d.answer(goal), "melting");
  ASSERT_EQ(d.firings.size(), 3u);
  for (std::size_t i = 0; i < d.firings.size(); ++i) {
    EXPECT_EQ(d.firings[i].rule, i);
    EXPECT_EQ(d.firings[i].round, i + 1);
  }
}

TEST(ForwardChain, SunburnBindsTheSubject) {
  const std::vector<Triple> facts{make_triple("sunlight", "is a kind of", "solar radiation"),
                                  make_triple("ultraviolet light", "causes", "sunburn"),
                                  make_triple("sunlight", "contains", "ultraviolet light")};
  const auto rules = parse_rules(
      "IF (?s, is a kind of, solar radiation) & (?s, contains, ?u) & (?u, causes, ?e) "
      "THEN (?u, is the form of solar radiation that causes, ?e)");
  const auto goal = parse_pattern("(?x, is the form of solar radiation that causes, sunburn)");
  const auto d = forward_chain(facts, rules, goal);
  EXPECT_EQ(d.answer(goal), "ultraviolet light");
  EXPECT_EQ(d.firings.size(), 1u);
  EXPECT_EQ(d.firings.front().premises.size(), 3u);
}

TEST(ForwardChain, GoalAmongFactsNeedsNoFiring) {
  const std::vector<Triple> facts{make_triple("a", "r", "b")};
  const auto d = forward_chain(facts, {}, parse_pattern("(a, r, ?x)"));
  EXPECT_TRUE(d.firings.empty());
  EXPECT_EQ(d.answer(parse_pattern("(a, r, ?x)")), "b");
}

TEST(ForwardChain, FixpointIsUnprovable) {
  const std::vector<Triple> facts{make_triple("a", "r", "b")};
  const auto rules = parse_rules("IF (?x, r, ?y) THEN (?y, s, ?x)");
  EXPECT_EQ(code_of([&] { (void)forward_chain(facts, rules, parse_pattern("(a, t, ?z)")); }), Errc::unprovable);
}

TEST(ForwardChain, BudgetCapsDerivations) {
  std::vector<Triple> facts;
  for (int i = 0; i < 20; ++i) facts.push_back(make_triple("n" + std::to_string(i), "r", "n" + std::to_string(i + 1)));
  const auto rules = parse_rules("IF (?x, r, ?y) & (?y, r, ?z) THEN (?x, r, ?z)");
  EXPECT_EQ(code_of([&] { (void)forward_chain(facts, rules, parse_pattern("(n0, q, ?z)"), {.max_firings = 10}); }),
            Errc::budget_exceeded);
}

}  // namespace
