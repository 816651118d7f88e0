#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgp {

/// The six reasoning task families.
enum class TaskKind {
  relation_prediction,
  dynamic_entity_prediction,
  complex_entity_prediction,
  graph_sorting,
  graph_query,
  logical_inference,
};

inline constexpr std::array<TaskKind, 6> kAllTasks = {
    TaskKind::relation_prediction,       TaskKind::dynamic_entity_prediction,
    TaskKind::complex_entity_prediction, TaskKind::graph_sorting,
    TaskKind::graph_query,               TaskKind::logical_inference,
};

/// naive is the bare question ("w/o 0-CoT"), zero_cot adds the step-by-step
/// instruction, sgp is the three-stage structure guided prompt.
enum class PromptMode { naive, zero_cot, sgp };

inline constexpr std::array<PromptMode, 3> kAllModes = {PromptMode::naive, PromptMode::zero_cot,
                                                        PromptMode::sgp};

enum class AnswerKind { option, entity, relation, number };

std::string_view to_string(TaskKind task) noexcept;
std::string_view to_string(PromptMode mode) noexcept;
std::string_view to_string(AnswerKind kind) noexcept;

/// Throw Error(unknown_task) / Error(unknown_mode).
TaskKind parse_task(std::string_view name);
PromptMode parse_mode(std::string_view name);
AnswerKind parse_answer_kind(std::string_view name);

/// Answer kind expected for a task: option letters for the BBH-derived
/// tasks, relation labels for relation prediction, entities otherwise.
AnswerKind answer_kind_for(TaskKind task) noexcept;

struct OptionChoice {
  std::string letter;  // "A", "B", ...
  std::string text;    // as in the source, without the "(A)" marker

  friend bool operator==(const OptionChoice&, const OptionChoice&) = default;
};

struct GoldAnswer {
  AnswerKind kind = AnswerKind::entity;
  std::string value;  // option letter, relation label, entity text or number text

  friend bool operator==(const GoldAnswer&, const GoldAnswer&) = default;
};

/// One benchmark question. `structured` carries the machine-readable form
/// (triples, events, constraints, rules) used by the deterministic oracle;
/// see structured.hpp for its schema.
struct TaskInstance {
  std::string id;
  TaskKind task = TaskKind::relation_prediction;
  std::string story;
  std::string question;
  std::vector<OptionChoice> options;
  GoldAnswer gold;
  std::string bucket;
  std::optional<nlohmann::json> structured;
  bool too_long = false;
};

/// Option text for a letter, if present.
std::optional<std::string> option_text(const TaskInstance& instance, std::string_view letter);

/// Validates the kind-specific gold invariants (option letter among the
/// options, non-empty entity, ...). Throws Error(validation).
void validate_gold(const TaskInstance& instance);

}  // namespace sgp
