#include "sgp/task.hpp"

#include "sgp/error.hpp"
#include "sgp/text.hpp"

namespace sgp {

std::string_view to_string(TaskKind task) noexcept {
  switch (task) {
    case TaskKind::relation_prediction: return "relation_prediction";
    case TaskKind::dynamic_entity_prediction: return "dynamic_entity_prediction";
    case TaskKind::complex_entity_prediction: return "complex_entity_prediction";
    case TaskKind::graph_sorting: return "graph_sorting";
    case TaskKind::graph_query: return "graph_query";
    case TaskKind::logical_inference: return "logical_inference";
  }
  return "unknown";
}

std::string_view to_string(PromptMode mode) noexcept {
  switch (mode) {
    case PromptMode::naive: return "naive";
    case PromptMode::zero_cot: return "zero_cot";
    case PromptMode::sgp: return "sgp";
  }
  return "unknown";
}

std::string_view to_string(AnswerKind kind) noexcept {
  switch (kind) {
    case AnswerKind::option: return "option";
    case AnswerKind::entity: return "entity";
    case AnswerKind::relation: return "relation";
    case AnswerKind::number: return "number";
  }
  return "unknown";
}

TaskKind parse_task(std::string_view name) {
  const std::string key = text::to_lower(text::trim(name));
  for (TaskKind task : kAllTasks) {
    if (key == to_string(task)) return task;
  }
  throw Error(Errc::unknown_task, "unknown task '" + std::string(name) + "'");
}

PromptMode parse_mode(std::string_view name) {
  std::string key = text::to_lower(text::trim(name));
  if (key == "0-cot" || key == "zero-cot") key = "zero_cot";
  for (PromptMode mode : kAllModes) {
    if (key == to_string(mode)) return mode;
  }
  throw Error(Errc::unknown_mode, "unknown mode '" + std::string(name) + "'");
}

AnswerKind parse_answer_kind(std::string_view name) {
  const std::string key = text::to_lower(text::trim(name));
  for (AnswerKind kind : {AnswerKind::option, AnswerKind::entity, AnswerKind::relation, AnswerKind::number}) {
    if (key == to_string(kind)) return kind;
  }
  throw Error(Errc::validation, "unknown answer kind '" + std::string(name) + "'");
}

AnswerKind answer_kind_for(TaskKind task) noexcept {
  switch (task) {
    case TaskKind::dynamic_entity_prediction:
    case TaskKind::graph_sorting:
    case TaskKind::graph_query:
      return AnswerKind::option;
    case TaskKind::relation_prediction:
      return AnswerKind::relation;
    case TaskKind::complex_entity_prediction:
    case TaskKind::logical_inference:
      return AnswerKind::entity;
  }
  return AnswerKind::entity;
}

std::optional<std::string> option_text(const TaskInstance& instance, std::string_view letter) {
  for (const auto& option : instance.options) {
    if (text::iequals(option.letter, letter)) return option.text;
  }
  return std::nullopt;
}

void validate_gold(const TaskInstance& instance) {
  const auto& gold = instance.gold;
  if (text::trim(gold.value).empty()) {
    throw Error(Errc::validation, "instance " + instance.id + " has an empty gold answer");
  }
  switch (gold.kind) {
    case AnswerKind::option:
      if (!option_text(instance, gold.value)) {
        throw Error(Errc::validation,
                    "instance " + instance.id + " gold letter " + gold.value + " is not among its options");
      }
      break;
    case AnswerKind::number:
      if (!text::parse_numeric_literal(gold.value)) {
        throw Error(Errc::validation, "instance " + instance.id + " gold is not numeric: " + gold.value);
      }
      break;
    case AnswerKind::entity:
    case AnswerKind::relation:
      break;
  }
}

}  // namespace sgp
