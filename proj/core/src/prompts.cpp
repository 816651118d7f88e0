#include "sgp/prompts.hpp"

#include <map>
#include <utility>

#include "prompt_texts.hpp"
#include "sgp/digest.hpp"
#include "sgp/error.hpp"

namespace sgp {

namespace {

using Key = std::pair<TaskKind, PromptMode>;

std::map<Key, PromptTemplate> build_registry() {
  std::map<Key, PromptTemplate> registry;
  for (const auto& entry : detail::prompt_texts()) {
    PromptTemplate t{entry.task, entry.mode, {}, {}};
    for (std::size_t i = 0; i < entry.stages.size(); ++i) {
      if (i > 0) t.instruction_text += ' ';
      const std::size_t begin = t.instruction_text.size();
      t.instruction_text += entry.stages[i];
      if (entry.mode == PromptMode::sgp) t.stage_spans.push_back({begin, t.instruction_text.size()});
    }
    registry.emplace(Key{entry.task, entry.mode}, std::move(t));
  }
  return registry;
}

const std::map<Key, PromptTemplate>& registry() {
  static const std::map<Key, PromptTemplate> r = build_registry();
  return r;
}

}  // namespace

std::string_view PromptTemplate::stage(std::size_t i) const {
  const TextSpan& s = stage_spans.at(i);
  return std::string_view(instruction_text).substr(s.begin, s.end - s.begin);
}

const PromptTemplate& prompt_template(TaskKind task, PromptMode mode) {
  auto it = registry().find({task, mode});
  if (it == registry().end()) throw Error(Errc::unknown_mode, "no template registered for this task and mode");
  return it->second;
}

const PromptTemplate& prompt_template(std::string_view task, std::string_view mode) {
  return prompt_template(parse_task(task), parse_mode(mode));
}

PromptBundle render_prompt(TaskKind task, PromptMode mode, const TaskInstance& instance) {
  std::string content = prompt_template(task, mode).instruction_text;
  content += "\n\n";
  content += instance.story;
  content += "\n\n";
  content += instance.question;
  if (!instance.options.empty()) {
    content += "\nOptions:";
    for (const auto& o : instance.options) content += "\n(" + o.letter + ") " + o.text;
  }
  PromptBundle bundle;
  bundle.fingerprint = sha256_hex(content);
  bundle.messages.push_back({"user", std::move(content)});
  return bundle;
}

PromptBundle render_prompt(std::string_view task, std::string_view mode, const TaskInstance& instance) {
  return render_prompt(parse_task(task), parse_mode(mode), instance);
}

std::string template_fingerprint(TaskKind task, PromptMode mode) {
  std::string material(to_string(task));
  material += '\n';
  material += to_string(mode);
  material += '\n';
  material += prompt_template(task, mode).instruction_text;
  return sha256_hex(material);
}

std::string template_fingerprint(std::string_view task, std::string_view mode) {
  return template_fingerprint(parse_task(task), parse_mode(mode));
}

std::string template_file_name(TaskKind task, PromptMode mode) {
  return std::string(to_string(task)) + "." + std::string(to_string(mode)) + ".txt";
}

std::string template_file_text(TaskKind task, PromptMode mode) {
  return prompt_template(task, mode).instruction_text + "\n";
}

}  // namespace sgp
