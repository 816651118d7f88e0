#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sgp/task.hpp"

namespace sgp {

/// Half-open byte range [begin, end) into instruction_text.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

/// sgp templates carry three ordered, disjoint stage spans (build the graph,
/// plan the navigation, execute it); other modes carry none.
struct PromptTemplate {
  TaskKind task = TaskKind::relation_prediction;
  PromptMode mode = PromptMode::sgp;
  std::string instruction_text;
  std::vector<TextSpan> stage_spans;

  [[nodiscard]] std::string_view stage(std::size_t i) const;
};

struct Message {
  std::string role;  // always "user"
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Exactly one user message; no system message.
struct PromptBundle {
  std::vector<Message> messages;
  std::string fingerprint;  // sha256 of the rendered content
};

/// The compiled-in template for (task, mode). Never throws for valid enums.
const PromptTemplate& prompt_template(TaskKind task, PromptMode mode);

/// Name-based lookup. Throws Error(unknown_task) / Error(unknown_mode).
const PromptTemplate& prompt_template(std::string_view task, std::string_view mode);

/// instruction, blank line, story, blank line, question; option tasks append
/// "Options:" and one "(X) text" line per option.
PromptBundle render_prompt(TaskKind task, PromptMode mode, const TaskInstance& instance);
PromptBundle render_prompt(std::string_view task, std::string_view mode, const TaskInstance& instance);

/// sha256 over task, mode and instruction text.
std::string template_fingerprint(TaskKind task, PromptMode mode);
std::string template_fingerprint(std::string_view task, std::string_view mode);

/// "<task>.<mode>.txt"
std::string template_file_name(TaskKind task, PromptMode mode);

/// File contents: the instruction text plus a trailing newline.
std::string template_file_text(TaskKind task, PromptMode mode);

}  // namespace sgp
