#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sgp/cli.hpp"
#include "sgp/datasets.hpp"
#include "sgp/prompts.hpp"
#include "sgp/textgraph.hpp"

namespace {

using namespace sgp;
namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string solve_file(const std::string& name) {
  return (fs::path(SGP_SOURCE_DIR) / "fixtures" / "solve" / name).string();
}

std::string fixture(const std::string& name) { return (fs::path(SGP_SOURCE_DIR) / "fixtures" / name).string(); }

// The printed derivation parses back with no skipped lines and ends on the answer.
void expect_round_trip(const Outcome& r, const std::string& answer, AnswerKind kind) {
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), answer);
  const auto parsed = parse_response(r.out, kind);
  EXPECT_EQ(parsed.graph.diagnostics.skipped_lines, 0u);
  EXPECT_FALSE(parsed.graph.all().empty());
  ASSERT_TRUE(parsed.final_answer);
  EXPECT_TRUE(answers_equivalent(parsed.final_answer->value, answer, kind));
}

TEST(CliSolve, Relation) {
  expect_round_trip(cli({"solve", "relation", "--facts", solve_file("frameworks_story.triples"), "--pair", "Jeremy",
                         "Seth"}),
                    "cousin", AnswerKind::relation);
}

TEST(CliSolve, Dynamic) {
  expect_round_trip(cli({"solve", "dynamic", "--facts", solve_file("books.triples"), "--events",
                         solve_file("books.events"), "--functional", "has book", "--entity", "Alice", "--relation",
                         "has book"}),
                    "The Odyssey", AnswerKind::entity);
}

TEST(CliSolve, Sort) {
  expect_round_trip(cli({"solve", "sort", "--constraints", solve_file("birds.txt"), "--position", "2"}), "raven",
                    AnswerKind::entity);
}

TEST(CliSolve, Query) {
  expect_round_trip(cli({"solve", "query", "--table", solve_file("penguins.csv"), "--class", "penguin", "--last",
                         "name"}),
                    "Vincent", AnswerKind::entity);
  const auto count = cli({"solve", "query", "--table", solve_file("penguins.csv"), "--class", "penguin", "--where",
                          "age>5", "--count"});
  ASSERT_EQ(count.code, kExitOk) << count.err;
  EXPECT_EQ(count.out.substr(0, 2), "3\n");
}

TEST(CliSolve, JsonOutput) {
  const auto r = cli({"solve", "relation", "--facts", solve_file("frameworks_story.triples"), "--pair", "Jeremy",
                      "Seth", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("answer"), "cousin");
  EXPECT_EQ(j.at("conclusion"), "(Seth, cousin, Jeremy)");
}

TEST(CliSolve, ExitCodes) {
  EXPECT_EQ(cli({"solve", "sudoku"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", "relation", "--facts", solve_file("frameworks_story.triples"), "--pair", "Jeremy", "Nobody"})
                .code,
            kExitUnanswerable);
  EXPECT_EQ(cli({"solve", "sort", "--constraints", solve_file("birds.txt")}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", "relation", "--facts", "/no/such/file", "--pair", "a", "b"}).code, kExitUsage);
  EXPECT_EQ(cli({"--no-such-flag"}).code, kExitUsage);
}

TEST(CliPromptDump, PrintsTemplateVerbatim) {
  const auto r = cli({"prompt-dump", "logical_inference", "sgp"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, template_file_text(TaskKind::logical_inference, PromptMode::sgp));
  EXPECT_EQ(cli({"prompt-dump", "logical_inference", "few_shot"}).code, kExitUsage);
}

TEST(CliRun, MockRunWritesReport) {
  const auto out = fs::temp_directory_path() / ("sgp-cli-run-" + std::to_string(::getpid()));
  fs::remove_all(out);
  const auto r = cli({"run", "--dataset", fixture("clutrr"), "--mode", "naive,sgp", "--backend", "mock", "--out",
                      out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(out / "matrix.csv"));
  EXPECT_TRUE(fs::exists(out / "provenance.json"));

  const auto report = cli({"report", out.string(), "--csv"});
  ASSERT_EQ(report.code, kExitOk) << report.err;
  EXPECT_EQ(report.out, read_file(out / "matrix.csv"));
  fs::remove_all(out);
}

TEST(CliRun, LiveWithoutKeyFails) {
  ::unsetenv("SGP_API_KEY");
  const auto out = fs::temp_directory_path() / ("sgp-cli-live-" + std::to_string(::getpid()));
  const auto r = cli({"run", "--dataset", fixture("clutrr"), "--backend", "live", "--out", out.string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("SGP_API_KEY"), std::string::npos);
  fs::remove_all(out);
}

TEST(CliReport, ReferenceTable) {
  const auto r = cli({"report", "--reference", fixture("paper_results/clutrr_gpt4.csv"), "--task",
                      "relation_prediction", "--csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "mode,3,4,5,6,7,8,9,10");
}

TEST(CliCache, StatsOnEmptyDir) {
  const auto dir = fs::temp_directory_path() / ("sgp-cli-cache-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto r = cli({"cache", "stats", "--dir", dir.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(cli({"cache", "clear", "--dir", dir.string()}).code, kExitOk);
  EXPECT_EQ(cli({"cache", "shrink", "--dir", dir.string()}).code, kExitUsage);
  fs::remove_all(dir);
}

}  // namespace
