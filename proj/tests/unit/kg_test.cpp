#include <gtest/gtest.h>

#include "sgp/error.hpp"
#include "sgp/kg.hpp"

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

TEST(Triple, MakeTripleCanonicalisesRelationAndTrims) {
  const auto t = make_triple(" Alice ", "has_book", " The Pearl ");
  EXPECT_EQ(t.subject, "Alice");
  EXPECT_EQ(t.relation, "has book");
  EXPECT_EQ(t.object, "The Pearl");
  EXPECT_EQ(to_text(t), "(Alice, has book, The Pearl)");
}

TEST(Triple, RejectsEmptyFieldsAndSeparators) {
  EXPECT_EQ(code_of([] { make_triple("", "r", "o"); }), Errc::validation);
  EXPECT_EQ(code_of([] { make_triple("a, b", "r", "o"); }), Errc::validation);
  EXPECT_EQ(code_of([] { make_triple("a", "r,s", "o"); }), Errc::validation);
  EXPECT_NO_THROW(make_triple("Lush Ltd.", "headquartered in", "Poole, Dorset"));
}

TEST(Triple, TimestepIsRendered) {
  EXPECT_EQ(to_text(make_triple("a", "r", "b", 2)), "t=2: (a, r, b)");
}

TEST(KnowledgeGraph, DuplicatesAreIgnored) {
  KnowledgeGraph kg;
  kg.add(make_triple("a", "r", "b"));
  kg.add(make_triple("A", "r", "b"));
  EXPECT_EQ(kg.size(), 1u);
  EXPECT_TRUE(kg.contains(make_triple("a", "r", "B")));
}

TEST(KnowledgeGraph, FunctionalRelationSupersedes) {
  KnowledgeGraph kg(std::set<std::string>{"has"});
  kg.add(make_triple("Alice", "has", "ball"));
  kg.add(make_triple("Bob", "has", "bat"));
  kg.add(make_triple("Alice", "has", "kite"));
  EXPECT_EQ(kg.objects("Alice", "has"), std::vector<std::string>{"kite"});
  ASSERT_EQ(kg.provenance().size(), 1u);
  EXPECT_EQ(kg.provenance().front().object, "ball");
  // The replacement keeps the superseded fact's position.
  EXPECT_EQ(kg.triples().front().object, "kite");
  EXPECT_TRUE(kg.indexes_consistent());
}

TEST(KnowledgeGraph, NonFunctionalRelationAccumulates) {
  KnowledgeGraph kg;
  kg.add(make_triple("Alice", "likes", "tea"));
  kg.add(make_triple("Alice", "likes", "jam"));
  EXPECT_EQ(kg.objects("alice", "likes").size(), 2u);
  EXPECT_EQ(kg.subjects("likes", "TEA"), std::vector<std::string>{"Alice"});
}

TEST(KnowledgeGraph, DisplayNameKeepsFirstCasing) {
  KnowledgeGraph kg;
  kg.add(make_triple("Alice", "r", "bob"));
  kg.add(make_triple("BOB", "r", "Carl"));
  EXPECT_EQ(kg.display_name("bob"), "bob");
  EXPECT_EQ(kg.entities(), (std::vector<std::string>{"Alice", "bob", "Carl"}));
  EXPECT_EQ(kg.subject_entities(), (std::vector<std::string>{"Alice", "bob"}));
  EXPECT_TRUE(kg.has_entity("CARL"));
}

TEST(KnowledgeGraph, EqualityIgnoresOrderAndCasing) {
  KnowledgeGraph a;
  a.add(make_triple("x", "r", "y"));
  a.add(make_triple("y", "s", "z"));
  KnowledgeGraph b;
  b.add(make_triple("Y", "s", "z"));
  b.add(make_triple("x", "r", "Y"));
  EXPECT_TRUE(a == b);
  b.add(make_triple("z", "t", "x"));
  EXPECT_FALSE(a == b);
}

TEST(KnowledgeGraph, AddFactHasValueSemantics) {
  KnowledgeGraph a;
  const auto b = add_fact(a, make_triple("x", "r", "y"));
  EXPECT_TRUE(a.empty());
  EXPECT_EQ(b.size(), 1u);
}

TEST(FindPath, ShortestUndirectedWithDirections) {
  KnowledgeGraph kg;
  kg.add(make_triple("Christian", "son", "Seth"));
  kg.add(make_triple("Christian", "brother", "Jonathan"));
  kg.add(make_triple("Jonathan", "sister", "Ruth"));
  const auto path = find_path(kg, "Seth", "Ruth");
  ASSERT_EQ(path.size(), 3u);
  EXPECT_EQ(path[0].direction, Direction::inverse);
  EXPECT_EQ(path[0].to, "Christian");
  EXPECT_EQ(path[1].direction, Direction::forward);
  EXPECT_EQ(path[2].to, "Ruth");
  EXPECT_TRUE(find_path(kg, "ruth", "Ruth").empty());
}

TEST(FindPath, PrefersEarlierEdgesOnTies) {
  KnowledgeGraph kg;
  kg.add(make_triple("a", "r1", "b"));
  kg.add(make_triple("a", "r2", "c"));
  kg.add(make_triple("b", "r3", "d"));
  kg.add(make_triple("c", "r4", "d"));
  const auto path = find_path(kg, "a", "d");
  ASSERT_EQ(path.size(), 2u);
  EXPECT_EQ(path[0].relation, "r1");
}

TEST(FindPath, ErrorsNameTheFailure) {
  KnowledgeGraph kg;
  kg.add(make_triple("a", "r", "b"));
  kg.add(make_triple("c", "r", "d"));
  EXPECT_EQ(code_of([&] { (void)find_path(kg, "a", "zz"); }), Errc::entity_not_found);
  EXPECT_EQ(code_of([&] { (void)find_path(kg, "a", "d"); }), Errc::no_path);
}

TEST(Events, TextRoundTrip) {
  const Event swap = Swap{"Alice", "Bob", "has book"};
  const Event assign = Assign{"Alice", "at", "park"};
  EXPECT_EQ(parse_event(to_text(swap)), swap);
  EXPECT_EQ(parse_event(to_text(assign)), assign);
  EXPECT_EQ(code_of([] { parse_event("trade(a, b)"); }), Errc::validation);
}

TEST(Events, SwapExchangesValues) {
  KnowledgeGraph kg(std::set<std::string>{"has"});
  kg.add(make_triple("Alice", "has", "ball"));
  kg.add(make_triple("Bob", "has", "bat"));
  const auto next = apply_event(kg, Swap{"Alice", "Bob", "has"}, 1);
  EXPECT_EQ(next.objects("Alice", "has"), std::vector<std::string>{"bat"});
  EXPECT_EQ(next.objects("Bob", "has"), std::vector<std::string>{"ball"});
  EXPECT_EQ(kg.objects("Alice", "has"), std::vector<std::string>{"ball"});
}

TEST(Events, SwapNeedsExactlyOneValueEach) {
  KnowledgeGraph kg;
  kg.add(make_triple("Alice", "has", "ball"));
  kg.add(make_triple("Alice", "has", "kite"));
  kg.add(make_triple("Bob", "has", "bat"));
  EXPECT_EQ(code_of([&] { (void)apply_event(kg, Swap{"Alice", "Bob", "has"}); }), Errc::invalid_event);
  EXPECT_EQ(code_of([&] { (void)apply_event(kg, Swap{"Carl", "Bob", "has"}); }), Errc::invalid_event);
}

TEST(Events, AssignReplacesCurrentValues) {
  KnowledgeGraph kg;
  kg.add(make_triple("Alice", "at", "home"));
  const auto next = apply_event(kg, Assign{"Alice", "at", "park"});
  EXPECT_EQ(next.objects("Alice", "at"), std::vector<std::string>{"park"});
}

TEST(DynamicSeries, KeepsOneSnapshotPerEventPlusInitial) {
  KnowledgeGraph kg(std::set<std::string>{"has"});
  kg.add(make_triple("Alice", "has", "ball"));
  kg.add(make_triple("Bob", "has", "bat"));
  DynamicSeries series(kg);
  series.apply(Swap{"Alice", "Bob", "has"});
  series.apply(Swap{"Bob", "Alice", "has"});
  EXPECT_EQ(series.snapshots().size(), series.events().size() + 1);
  EXPECT_TRUE(series.current() == kg);
  const auto copy = apply_event(series, Assign{"Alice", "has", "kite"});
  EXPECT_EQ(copy.snapshots().size(), 4u);
  EXPECT_EQ(series.snapshots().size(), 3u);
}

}  // namespace
