#include <gtest/gtest.h>

#include "sgp/csv.hpp"
#include "sgp/digest.hpp"
#include "sgp/error.hpp"
#include "sgp/task.hpp"
#include "sgp/text.hpp"

namespace {

using namespace sgp;

TEST(Text, CanonicalRelationSplitsCamelCaseAndUnderscores) {
  EXPECT_EQ(text::canonical_relation("hasSon"), "has son");
  EXPECT_EQ(text::canonical_relation("is\\_friend\\_with"), "is friend with");
  EXPECT_EQ(text::canonical_relation("  has_book "), "has book");
  EXPECT_EQ(text::canonical_relation("Father-In-Law"), "father-in-law");
}

TEST(Text, EntityKeyFoldsCaseAndSpacing) {
  EXPECT_EQ(text::entity_key("  The   Odyssey "), "the odyssey");
  EXPECT_EQ(text::entity_key("ALICE"), text::entity_key("alice"));
}

TEST(Text, NormalizeAnswerStripsQuotesAndPunctuation) {
  EXPECT_EQ(text::normalize_answer("'melting'."), "melting");
  EXPECT_EQ(text::normalize_answer("wild_fish"), "wild fish");
  EXPECT_EQ(text::normalize_entity("The Odyssey"), "odyssey");
  EXPECT_EQ(text::normalize_entity("a blue present"), "blue present");
}

TEST(Text, NumericLiteralsAcceptUnitsAndNumberWords) {
  EXPECT_EQ(text::parse_numeric_literal("13 kg"), 13.0);
  EXPECT_EQ(text::parse_numeric_literal("80cm"), 80.0);
  EXPECT_EQ(text::parse_numeric_literal("+2.5"), 2.5);
  EXPECT_EQ(text::parse_numeric_literal("Three"), 3.0);
  EXPECT_EQ(text::parse_numeric_literal("zero"), 0.0);
  EXPECT_FALSE(text::parse_numeric_literal("3 apples"));
  EXPECT_FALSE(text::parse_numeric_literal("kg"));
  EXPECT_FALSE(text::parse_numeric_literal(""));
}

TEST(Text, FormatNumberIsShortest) {
  EXPECT_EQ(text::format_number(3.0), "3");
  EXPECT_EQ(text::format_number(0.5), "0.5");
  EXPECT_EQ(text::format_number(0.39), "0.39");
}

TEST(Text, SplitLinesHandlesCarriageReturns) {
  const auto lines = text::split_lines("a\r\nb\nc");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "a");
  EXPECT_EQ(lines[2], "c");
}

TEST(Csv, QuotedFieldsKeepCommasQuotesAndNewlines) {
  const auto rows = csv::parse("a,b\n\"x, y\",\"say \"\"hi\"\"\nthere\"\n\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "x, y");
  EXPECT_EQ(rows[1][1], "say \"hi\"\nthere");
}

TEST(Csv, UnterminatedQuoteIsUnparseable) {
  try {
    csv::parse("a\n\"open");
    FAIL() << "expected UnparseableRow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unparseable_row);
  }
}

TEST(Csv, EscapeQuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv::escape("plain"), "plain");
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape("q\""), "\"q\"\"\"");
}

TEST(Digest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Task, NamesRoundTrip) {
  for (TaskKind t : kAllTasks) EXPECT_EQ(parse_task(to_string(t)), t);
  for (PromptMode m : kAllModes) EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_THROW(parse_task("bogus"), Error);
  try {
    parse_mode("bogus");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_mode);
  }
}

TEST(Task, AnswerKindPerTask) {
  EXPECT_EQ(answer_kind_for(TaskKind::relation_prediction), AnswerKind::relation);
  EXPECT_EQ(answer_kind_for(TaskKind::graph_sorting), AnswerKind::option);
  EXPECT_EQ(answer_kind_for(TaskKind::dynamic_entity_prediction), AnswerKind::option);
  EXPECT_EQ(answer_kind_for(TaskKind::graph_query), AnswerKind::option);
  EXPECT_EQ(answer_kind_for(TaskKind::complex_entity_prediction), AnswerKind::entity);
  EXPECT_EQ(answer_kind_for(TaskKind::logical_inference), AnswerKind::entity);
}

TEST(Task, GoldLetterMustBeListed) {
  TaskInstance i;
  i.task = TaskKind::graph_sorting;
  i.options = {{"A", "x"}, {"B", "y"}};
  i.gold = {AnswerKind::option, "C"};
  EXPECT_THROW(validate_gold(i), Error);
  i.gold.value = "B";
  EXPECT_NO_THROW(validate_gold(i));
  EXPECT_EQ(option_text(i, "B"), "y");
}

TEST(Errors, MessageCarriesStableName) {
  const Error e(Errc::no_path, "no route");
  EXPECT_STREQ(e.what(), "NoPath: no route");
  EXPECT_EQ(errc_name(Errc::undefined_composition), "Undefined");
}

}  // namespace
