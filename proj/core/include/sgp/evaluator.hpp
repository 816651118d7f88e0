#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgp/datasets.hpp"
#include "sgp/gateway.hpp"
#include "sgp/task.hpp"
#include "sgp/textgraph.hpp"

namespace sgp {

// ---------------------------------------------------------------------------
// Scoring

/// option: letters equal after stripping parentheses. relation: equal under
/// the alias table, a neutral label matching either gender. entity: normalised
/// containment in either direction. number: numeric equality.
/// Throws Error(incompatible_kinds) when pred.kind cannot meet the policy.
bool score_instance(const ParsedAnswer& pred, const GoldAnswer& gold, AnswerKind policy,
                    const AliasTable& aliases = {});

// ---------------------------------------------------------------------------
// Runs

enum class BackendChoice { live, mock, cache };  // cache wraps live
std::string_view to_string(BackendChoice choice) noexcept;
BackendChoice parse_backend(std::string_view name);

/// Invariants (checked by validate): at least one mode, concurrency >= 1,
/// temperature in [0, 2], max_tokens > 0, fault_rate in [0, 1].
struct RunConfig {
  std::string dataset;  // fixture directory holding manifest.json
  std::vector<PromptMode> modes{PromptMode::sgp};
  BackendChoice backend = BackendChoice::mock;
  std::string model = "gpt-4";
  std::string base_url = "https://api.openai.com/v1";
  std::size_t concurrency = 4;
  std::size_t max_retries = 4;
  std::string cache_dir = ".sgp-cache";
  std::optional<std::size_t> token_budget;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::size_t max_prompt_chars = 24000;
  std::filesystem::path output_dir = "sgp-report";
  std::uint64_t seed = kHotpotSeed;
  FaultMode fault = FaultMode::none;
  double fault_rate = 1.0;

  /// Throws Error(config).
  void validate() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Flat JSON object; unknown keys and ill-typed values throw Error(config).
/// Keys: dataset, modes (array or comma list), backend, model, base_url,
/// max_concurrency, max_retries, cache_dir, token_budget, temperature,
/// max_tokens, max_prompt_chars, output_dir, seed, fault, fault_rate.
void apply_config_json(RunConfig& config, const nlohmann::json& json);
RunConfig load_run_config(const std::filesystem::path& path);

/// The backend a config asks for. The live backend reads SGP_API_KEY and
/// throws Error(auth) when it is missing.
std::unique_ptr<Backend> make_backend(const RunConfig& config, std::span<const TaskInstance> instances);

struct RecordDiagnostics {
  std::size_t triples = 0;
  std::size_t blocks = 0;
  std::size_t skipped_lines = 0;
};

/// `correct` is computed from `parsed` against `gold` only.
struct InstanceRecord {
  std::string instance_id;
  TaskKind task = TaskKind::relation_prediction;
  PromptMode mode = PromptMode::sgp;
  std::string bucket;
  std::string prompt_fingerprint;
  std::string template_fingerprint;
  std::string raw_response;
  std::optional<ParsedAnswer> parsed;
  GoldAnswer gold;
  bool correct = false;
  ConsistencyReport consistency;
  RecordDiagnostics diagnostics;
  std::optional<std::string> error;  // "<ErrorName>: message" when the instance failed
};

struct Cell {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t errors = 0;
  std::size_t inconsistent = 0;
  std::optional<double> reference_accuracy;  // set only for reference tables

  [[nodiscard]] bool empty() const noexcept { return total == 0 && !reference_accuracy; }
  /// correct / total, or the reference value.
  [[nodiscard]] double accuracy() const;
  [[nodiscard]] double inconsistency_rate() const;
};

struct EvalReport {
  TaskKind task = TaskKind::relation_prediction;
  std::vector<PromptMode> modes;
  std::vector<std::string> buckets;  // scheme order
  std::map<std::pair<PromptMode, std::string>, Cell> cells;
  std::vector<InstanceRecord> records;  // sorted by (instance id, mode)
  nlohmann::json provenance;            // config, fingerprints, timestamps

  [[nodiscard]] const Cell& cell(PromptMode mode, std::string_view bucket) const;
};

/// Renders, completes, parses, scores and audits every instance x mode on
/// `concurrency` workers. Per-instance failures are recorded, never thrown.
/// Throws Error(config) on an empty instance list or a bad config, and
/// Error(all_instances_failed) when every record errored.
EvalReport run_suite(const RunConfig& config, std::span<const TaskInstance> instances, Backend& backend,
                     const AliasTable& aliases = {});

/// Recomputes the cell table from the records alone.
std::map<std::pair<PromptMode, std::string>, Cell> aggregate(std::span<const InstanceRecord> records);

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { json, matrix_csv, plot_csv };

/// "mode,<bucket>,..." then one row per mode. Buckets empty in every mode are
/// left out; an empty cell in a kept column is blank.
std::string matrix_csv(const EvalReport& report);
/// "bucket,mode,accuracy" rows for non-empty cells.
std::string plot_csv(const EvalReport& report);
/// Records and per-cell stats; empty cells are null. Holds no timestamps.
nlohmann::json records_json(const EvalReport& report);

/// Writes records.json, matrix.csv and plotdata.csv as requested, and always
/// provenance.json. Returns the written paths. Throws Error(io).
std::vector<std::filesystem::path> emit_report(
    const EvalReport& report, const std::filesystem::path& dir,
    const std::set<ReportFormat>& formats = {ReportFormat::json, ReportFormat::matrix_csv, ReportFormat::plot_csv});

/// A reference table in matrix layout ("mode,3,4,...", rows named by mode)
/// as a report with reference accuracies and no records.
EvalReport report_from_matrix(TaskKind task, std::string_view csv_text);

/// Console table of accuracies, one row per mode.
std::string format_matrix(const EvalReport& report);

}  // namespace sgp
