#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgp/task.hpp"

// Loaders that normalise the benchmark files into TaskInstance records with
// difficulty buckets. Loaders are deterministic: same input, same list.
namespace sgp {

inline constexpr std::uint64_t kHotpotSeed = 20240201;
inline constexpr std::string_view kHotpotBucket = "hard-bridge";

/// Alias spelling -> canonical relation label ("grand son" -> "grandson").
/// Keys and values are compared after canonical_relation.
class AliasTable {
 public:
  void add(std::string_view alias, std::string_view canonical);
  /// The canonical label for `label`, or `label` canonicalised when unknown.
  [[nodiscard]] std::string canonical(std::string_view label) const;
  [[nodiscard]] bool contains(std::string_view alias) const;
  [[nodiscard]] std::size_t size() const noexcept { return map_.size(); }

 private:
  std::map<std::string, std::string> map_;
};

/// JSON object {"canonical": ["alias", ...], ...}. Throws Error(schema_mismatch)
/// or Error(io).
AliasTable parse_aliases(const nlohmann::json& json);
AliasTable load_aliases(const std::filesystem::path& path);

/// Ordered bucket labels of a task's scheme.
///   relation_prediction: "3".."10"; dynamic and sorting: "3", "5", "7";
///   complex: "hard-bridge"; logical: "1".."6";
///   graph_query: "penguins_in_a_table", "reasoning_about_colored_objects".
const std::vector<std::string>& bucket_scheme(TaskKind task);

/// CLUTRR CSV. Required columns: story, query ("('A', 'B')"), target, and a
/// hop source: task_name ("task_1.N") or f_comb ("r1-r2-..."). An optional
/// "facts" column holds JSON triples and becomes the structured form.
/// Query (A, B) with target L reads "B is A's L". Rows whose hop count lies
/// outside 3..10 are skipped. Throws MissingColumn, UnparseableRow (details
/// hold the 1-based data row).
std::vector<TaskInstance> parse_clutrr(std::string_view csv_text, const AliasTable& aliases = {});
std::vector<TaskInstance> load_clutrr(const std::filesystem::path& path, const AliasTable& aliases = {});

/// BBH subtask name -> task kind; throws Error(unknown_subtask).
TaskKind bbh_task(std::string_view subtask);

/// {"examples": [{"input", "target"}]}; an example may carry "id" and
/// "structured". Throws SchemaMismatch, UnknownSubtask.
std::vector<TaskInstance> parse_bbh(const nlohmann::json& json, std::string_view subtask);
std::vector<TaskInstance> load_bbh(const std::filesystem::path& path, std::string_view subtask);

/// JSON array of {_id, question, answer, context: [[title, [sentences]]],
/// type?, level?}. Keeps bridge questions (and hard ones when levels are
/// annotated); samples `limit` of them with `seed` when fewer are asked for.
std::vector<TaskInstance> parse_hotpotqa(const nlohmann::json& json, std::optional<std::size_t> limit,
                                         std::uint64_t seed = kHotpotSeed);
std::vector<TaskInstance> load_hotpotqa(const std::filesystem::path& path, std::optional<std::size_t> limit,
                                        std::uint64_t seed = kHotpotSeed);

/// "Paragraph N <title>: <text>" blocks, one per line.
std::string render_paragraphs(const nlohmann::json& context);

/// One JSON object per line: id, question, answer, and sentences as
/// meta.triples {"sent1": ...} or a "context" string; steps from
/// length_of_proof or the proof's "->" count. Rows outside 1..6 steps are
/// skipped.
std::vector<TaskInstance> parse_entailmentbank(std::string_view jsonl);
std::vector<TaskInstance> load_entailmentbank(const std::filesystem::path& path);

/// Count per bucket in scheme order, zero buckets included. Throws
/// Error(mixed_tasks) when the instances span several task kinds.
std::vector<std::pair<std::string, std::size_t>> bucket_histogram(std::span<const TaskInstance> instances);

/// Marks instances whose story plus question exceeds max_chars; never truncates.
void flag_too_long(std::vector<TaskInstance>& instances, std::size_t max_chars);

/// Checks gold invariants, including relation golds against the kinship
/// labels and the alias table. Throws Error(validation).
void validate_instance(const TaskInstance& instance, const AliasTable& aliases = {});

/// `<dir>/manifest.json`:
///   {"name", "format": "clutrr"|"bbh"|"hotpotqa"|"entailmentbank", "file",
///    "subtask"?, "limit"?, "aliases"?, "histogram": {bucket: count}}
struct DatasetManifest {
  std::string name;
  std::string format;
  std::string file;
  std::string subtask;
  std::optional<std::size_t> limit;
  std::string aliases;
  std::map<std::string, std::size_t> histogram;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<TaskInstance> instances;
  AliasTable aliases;
};

DatasetManifest parse_manifest(const nlohmann::json& json);
Dataset load_dataset(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);

}  // namespace sgp
