#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sgp/error.hpp"
#include "sgp/textgraph.hpp"

namespace {

using namespace sgp;

std::string transcript(const std::string& name) {
  std::ifstream in(std::string(SGP_SOURCE_DIR) + "/fixtures/transcripts/" + name);
  EXPECT_TRUE(in) << name;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<OptionChoice> kBooks{{"A", "Hound of the Baskervilles"}, {"B", "The Pearl"}, {"C", "The Odyssey"}};

TEST(ExtractTriples, RecognisesLineShapes) {
  const auto ex = extract_triples(
      "Intro prose is ignored.\n"
      "(x, y, z)\n"
      "1. Story facts\n"
      "- (Alice, has_book, The Pearl)\n"
      "* Bob - likes - tea\n"
      "• Gwen - weight: 15 kg\n"
      "2. Chain\n"
      "(a, r, b) -> (b, s, c)\n"
      "t=3: (Alice, has, ball)\n"
      "(C) The Odyssey\n"
      "(broken, triple\n");
  ASSERT_EQ(ex.blocks.size(), 3u);
  EXPECT_EQ(ex.blocks[0].index, 0u);
  EXPECT_EQ(ex.blocks[1].index, 1u);
  EXPECT_EQ(ex.blocks[1].triples,
            (std::vector<Triple>{make_triple("Alice", "has book", "The Pearl"), make_triple("Bob", "likes", "tea"),
                                 make_triple("Gwen", "weight", "15 kg")}));
  ASSERT_EQ(ex.blocks[2].triples.size(), 3u);
  EXPECT_EQ(ex.blocks[2].triples[2], make_triple("Alice", "has", "ball", 3));
  EXPECT_EQ(ex.diagnostics.blocks_found, 2u);
  EXPECT_EQ(ex.diagnostics.skipped_lines, 1u);
}

TEST(ExtractTriples, ObjectKeepsCommas) {
  const auto all = extract_triples("(Lush Ltd., headquartered in, Poole, Dorset, United Kingdom)").all();
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all.front().object, "Poole, Dorset, United Kingdom");
}

TEST(ExtractTriples, TranscriptBlocks) {
  const auto ex = extract_triples(transcript("books.txt"));
  ASSERT_EQ(ex.blocks.size(), 5u);
  EXPECT_EQ(ex.blocks.back().index, 5u);
  EXPECT_EQ(ex.blocks.back().triples.back(), make_triple("Alice", "has book", "The Odyssey"));
  EXPECT_EQ(ex.diagnostics.skipped_lines, 0u);
  EXPECT_EQ(extract_triples(transcript("laura.txt")).all().size(), 5u);
}

TEST(FinalAnswer, Markers) {
  EXPECT_EQ(extract_final_answer("Thus option (B) is right.", AnswerKind::option).value, "B");
  EXPECT_EQ(extract_final_answer("The correct statement is (D).", AnswerKind::option).value, "D");
  EXPECT_EQ(extract_final_answer("So the answer is: 3", AnswerKind::number).value, "3");
  EXPECT_EQ(extract_final_answer("The missing relation is 'grandson'.", AnswerKind::relation).value, "grandson");
  EXPECT_EQ(extract_final_answer("Hence Jeremy is Seth's cousin.", AnswerKind::relation).value, "cousin");
  EXPECT_EQ(extract_final_answer("(A) Louis\nExplanation: ...", AnswerKind::option).value, "A");
  EXPECT_EQ(extract_final_answer("We can conclude that the process is melting.", AnswerKind::entity).value,
            "melting");
}

TEST(FinalAnswer, LastMarkerWins) {
  const auto a = extract_final_answer("The answer is (A). On reflection, the answer is (C).", AnswerKind::option);
  EXPECT_EQ(a.value, "C");
}

TEST(FinalAnswer, NoMarkerThrows) {
  EXPECT_FALSE(try_extract_final_answer("Nothing to see.", AnswerKind::entity));
  try {
    extract_final_answer("Nothing to see.", AnswerKind::entity);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_answer_found);
  }
}

TEST(Audit, ConsistentTranscript) {
  const auto r = audit_consistency(transcript("books.txt"), {"Alice", "has book", std::nullopt}, AnswerKind::option,
                                   kBooks);
  EXPECT_EQ(r.status, ConsistencyStatus::consistent);
  ASSERT_TRUE(r.derived);
  EXPECT_TRUE(answers_equivalent(r.derived->value, "The Odyssey", AnswerKind::entity));
}

TEST(Audit, DisagreementIsInconsistent) {
  auto text = transcript("books.txt");
  text.replace(text.rfind("option (C)"), 10, "option (B)");
  const auto r = audit_consistency(text, {"Alice", "has book", std::nullopt}, AnswerKind::option, kBooks);
  EXPECT_EQ(r.status, ConsistencyStatus::inconsistent);
  EXPECT_FALSE(r.evidence.empty());
}

TEST(Audit, MissingSideIsInconclusive) {
  const auto r = audit_consistency("The answer is (A).", {"Alice", "has book", std::nullopt}, AnswerKind::option,
                                   kBooks);
  EXPECT_EQ(r.status, ConsistencyStatus::inconclusive);
  EXPECT_THROW(audit_consistency("x", {"a", std::nullopt, std::nullopt}, AnswerKind::entity), Error);
  EXPECT_THROW(audit_consistency("x", {"a", "r", "b"}, AnswerKind::entity), Error);
}

TEST(Answers, Equivalence) {
  EXPECT_TRUE(answers_equivalent("grand son", "grandson", AnswerKind::relation));
  EXPECT_TRUE(answers_equivalent("cousin", "Cousin", AnswerKind::relation));
  EXPECT_TRUE(answers_equivalent("sibling", "sister", AnswerKind::relation));
  EXPECT_FALSE(answers_equivalent("brother", "sister", AnswerKind::relation));
  EXPECT_TRUE(answers_equivalent("3.0", "3", AnswerKind::number));
  EXPECT_TRUE(answers_equivalent("The Odyssey", "odyssey", AnswerKind::entity));
  EXPECT_FALSE(answers_equivalent("melting", "freezing", AnswerKind::entity));
}

TEST(Answers, ResolveOption) {
  EXPECT_EQ(resolve_option(kBooks, "the pearl"), "B");
  EXPECT_EQ(resolve_option(kBooks, "Odyssey"), "C");
  EXPECT_FALSE(resolve_option(kBooks, "Ulysses"));
  const std::vector<OptionChoice> counts{{"A", "1"}, {"B", "2"}, {"C", "3"}};
  EXPECT_EQ(resolve_option(counts, "two", AnswerKind::number), "B");
}

TEST(ParseResponse, SplitsGraphAndDerivation) {
  const auto r = parse_response(transcript("laura.txt"), AnswerKind::relation);
  EXPECT_EQ(r.graph.all().size(), 5u);
  ASSERT_TRUE(r.final_answer);
  EXPECT_EQ(r.final_answer->value, "mother");
  EXPECT_FALSE(r.derivation_lines.empty());
}

}  // namespace
