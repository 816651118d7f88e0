#include <gtest/gtest.h>

#include <filesystem>

#include "sgp/error.hpp"
#include "sgp/evaluator.hpp"

namespace {

using namespace sgp;
namespace fs = std::filesystem;

fs::path fixture(const std::string& name) { return fs::path(SGP_SOURCE_DIR) / "fixtures" / name; }

ParsedAnswer answer(AnswerKind kind, std::string value) { return {kind, std::move(value), {}}; }

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no sgp::Error thrown";
  return Errc::io;
}

TEST(Score, OptionLetters) {
  const GoldAnswer gold{AnswerKind::option, "C"};
  EXPECT_TRUE(score_instance(answer(AnswerKind::option, "(C)"), gold, AnswerKind::option));
  EXPECT_FALSE(score_instance(answer(AnswerKind::option, "B"), gold, AnswerKind::option));
}

TEST(Score, RelationsUseAliasesAndNeutralLabels) {
  AliasTable aliases;
  aliases.add("grand son", "grandson");
  EXPECT_TRUE(score_instance(answer(AnswerKind::relation, "grand son"), {AnswerKind::relation, "grandson"},
                             AnswerKind::relation, aliases));
  EXPECT_TRUE(score_instance(answer(AnswerKind::relation, "sibling"), {AnswerKind::relation, "sister"},
                             AnswerKind::relation));
  EXPECT_FALSE(score_instance(answer(AnswerKind::relation, "brother"), {AnswerKind::relation, "sister"},
                              AnswerKind::relation));
}

TEST(Score, EntitiesByContainmentAndNumbersByValue) {
  EXPECT_TRUE(score_instance(answer(AnswerKind::entity, "Lush Ltd."), {AnswerKind::entity, "Lush"},
                             AnswerKind::entity));
  EXPECT_TRUE(score_instance(answer(AnswerKind::entity, "melting"), {AnswerKind::entity, "the melting process"},
                             AnswerKind::entity));
  EXPECT_FALSE(score_instance(answer(AnswerKind::entity, "freezing"), {AnswerKind::entity, "melting"},
                              AnswerKind::entity));
  EXPECT_TRUE(score_instance(answer(AnswerKind::number, "3.0"), {AnswerKind::number, "3"}, AnswerKind::number));
}

TEST(Score, IncompatibleKinds) {
  EXPECT_EQ(code_of([] {
              (void)score_instance(answer(AnswerKind::entity, "x"), {AnswerKind::option, "A"}, AnswerKind::option);
            }),
            Errc::incompatible_kinds);
}

TEST(Config, ValidateAndJsonKeys) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  apply_config_json(c, {{"dataset", "fixtures/clutrr"}, {"modes", "naive,sgp"}, {"max_concurrency", 2},
                        {"fault", "corrupt_conclusion"}, {"fault_rate", 0.5}, {"token_budget", 1000}});
  EXPECT_EQ(c.modes, (std::vector<PromptMode>{PromptMode::naive, PromptMode::sgp}));
  EXPECT_EQ(c.concurrency, 2u);
  EXPECT_EQ(c.fault, FaultMode::corrupt_conclusion);
  EXPECT_EQ(c.token_budget, 1000u);
  EXPECT_EQ(c.to_json().at("dataset"), "fixtures/clutrr");
  EXPECT_EQ(code_of([&] { apply_config_json(c, {{"colour", "red"}}); }), Errc::config);
  EXPECT_EQ(code_of([&] { apply_config_json(c, {{"temperature", "hot"}}); }), Errc::config);
  c.fault_rate = 1.5;
  EXPECT_EQ(code_of([&] { c.validate(); }), Errc::config);
  c = RunConfig{};
  c.modes.clear();
  EXPECT_EQ(code_of([&] { c.validate(); }), Errc::config);
}

TEST(Config, LiveBackendNeedsKey) {
  ::unsetenv("SGP_API_KEY");
  RunConfig c;
  c.backend = BackendChoice::live;
  EXPECT_EQ(code_of([&] { (void)make_backend(c, {}); }), Errc::auth);
  EXPECT_EQ(parse_backend(to_string(BackendChoice::cache)), BackendChoice::cache);
}

struct Suite {
  Dataset dataset;
  RunConfig config;
};

Suite suite(const std::string& name, std::vector<PromptMode> modes, std::size_t concurrency = 4) {
  Suite s{load_dataset(fixture(name)), {}};
  s.config.dataset = fixture(name).string();
  s.config.modes = std::move(modes);
  s.config.concurrency = concurrency;
  return s;
}

EvalReport run(const Suite& s) {
  auto backend = make_backend(s.config, s.dataset.instances);
  return run_suite(s.config, s.dataset.instances, *backend, s.dataset.aliases);
}

TEST(RunSuite, MockSgpIsExact) {
  const auto s = suite("clutrr", {PromptMode::sgp});
  const auto report = run(s);
  EXPECT_EQ(report.records.size(), s.dataset.instances.size());
  for (const auto& bucket : report.buckets) {
    const auto& cell = report.cell(PromptMode::sgp, bucket);
    EXPECT_EQ(cell.total, 3u) << bucket;
    EXPECT_DOUBLE_EQ(cell.accuracy(), 1.0) << bucket;
    EXPECT_EQ(cell.errors, 0u);
  }
  for (const auto& r : report.records) {
    EXPECT_EQ(r.consistency.status, ConsistencyStatus::consistent) << r.instance_id;
    EXPECT_GT(r.diagnostics.triples, 0u);
    EXPECT_EQ(r.diagnostics.skipped_lines, 0u);
    EXPECT_EQ(r.prompt_fingerprint.size(), 64u);
  }
}

TEST(RunSuite, DeterministicAcrossConcurrency) {
  const auto a = run(suite("bbh-shuffled3", {PromptMode::naive, PromptMode::sgp}, 1));
  const auto b = run(suite("bbh-shuffled3", {PromptMode::naive, PromptMode::sgp}, 8));
  EXPECT_EQ(records_json(a), records_json(b));
  EXPECT_EQ(matrix_csv(a), matrix_csv(b));
  for (std::size_t i = 1; i < a.records.size(); ++i) {
    const auto& p = a.records[i - 1];
    const auto& q = a.records[i];
    EXPECT_TRUE(std::tie(p.instance_id, p.mode) < std::tie(q.instance_id, q.mode));
  }
}

TEST(RunSuite, AggregateRebuildsCells) {
  const auto report = run(suite("entailmentbank", {PromptMode::zero_cot, PromptMode::sgp}));
  const auto cells = aggregate(report.records);
  ASSERT_EQ(cells.size(), report.cells.size());
  for (const auto& [key, cell] : report.cells) {
    const auto& other = cells.at(key);
    EXPECT_EQ(other.total, cell.total);
    EXPECT_EQ(other.correct, cell.correct);
    EXPECT_EQ(other.errors, cell.errors);
    EXPECT_EQ(other.inconsistent, cell.inconsistent);
  }
}

TEST(RunSuite, FaultsAreAllDetected) {
  auto s = suite("bbh-penguins", {PromptMode::sgp});
  s.config.fault = FaultMode::corrupt_conclusion;
  s.config.fault_rate = 1.0;
  const auto report = run(s);
  for (const auto& r : report.records) {
    EXPECT_FALSE(r.correct) << r.instance_id;
    EXPECT_EQ(r.consistency.status, ConsistencyStatus::inconsistent) << r.instance_id;
  }
}

TEST(RunSuite, EmptyInputAndTotalFailure) {
  const auto s = suite("clutrr", {PromptMode::sgp});
  MockBackend backend(s.dataset.instances);
  EXPECT_EQ(code_of([&] { (void)run_suite(s.config, {}, backend); }), Errc::config);

  // A backend that knows none of the instances fails every record.
  MockBackend empty({});
  EXPECT_EQ(code_of([&] { (void)run_suite(s.config, s.dataset.instances, empty); }), Errc::all_instances_failed);
}

TEST(RunSuite, PartialFailuresAreRecorded) {
  const auto s = suite("clutrr", {PromptMode::sgp});
  std::vector<TaskInstance> known(s.dataset.instances.begin() + 1, s.dataset.instances.end());
  MockBackend backend(known);
  const auto report = run_suite(s.config, s.dataset.instances, backend, s.dataset.aliases);
  std::size_t errors = 0;
  for (const auto& r : report.records) {
    if (r.error) {
      ++errors;
      EXPECT_FALSE(r.correct);
      EXPECT_EQ(r.error->find(": "), r.error->find(':'));
    }
  }
  EXPECT_EQ(errors, 1u);
}

TEST(Reports, FilesAndLayouts) {
  const auto report = run(suite("clutrr", {PromptMode::naive, PromptMode::zero_cot, PromptMode::sgp}));
  const auto dir = fs::temp_directory_path() / ("sgp-report-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto written = emit_report(report, dir);
  EXPECT_EQ(written.size(), 4u);
  for (const char* name : {"records.json", "matrix.csv", "plotdata.csv", "provenance.json"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  EXPECT_EQ(read_file(dir / "matrix.csv"), matrix_csv(report));
  fs::remove_all(dir);

  const auto matrix = matrix_csv(report);
  EXPECT_EQ(matrix.substr(0, matrix.find('\n')), "mode,3,4,5,6,7,8,9,10");
  EXPECT_NE(matrix.find("\nzero_cot,"), std::string::npos);
  EXPECT_EQ(plot_csv(report).substr(0, 22), "bucket,mode,accuracy\n3");
  EXPECT_FALSE(records_json(report).dump().empty());
  EXPECT_FALSE(format_matrix(report).empty());
}

TEST(Reports, ReferenceMatrixRoundTrips) {
  const auto csv_text = read_file(fixture("paper_results") / "clutrr_gpt4.csv");
  const auto ref = report_from_matrix(TaskKind::relation_prediction, csv_text);
  EXPECT_TRUE(ref.records.empty());
  EXPECT_EQ(ref.modes.size(), 3u);
  const auto again = report_from_matrix(TaskKind::relation_prediction, matrix_csv(ref));
  for (PromptMode m : ref.modes) {
    for (const auto& b : ref.buckets) {
      EXPECT_DOUBLE_EQ(again.cell(m, b).accuracy(), ref.cell(m, b).accuracy());
    }
  }
  EXPECT_THROW((void)report_from_matrix(TaskKind::relation_prediction, "mode,3\nfew_shot,0.5\n"), Error);
}

}  // namespace
