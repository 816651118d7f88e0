#include <chrono>

#include "sgp/digest.hpp"
#include "sgp/error.hpp"
#include "sgp/gateway.hpp"
#include "sgp/kinship.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

bool related_entities(std::string_view a, std::string_view b) {
  const std::string x = text::normalize_entity(a);
  const std::string y = text::normalize_entity(b);
  return x.empty() || y.empty() || x.find(y) != std::string::npos || y.find(x) != std::string::npos;
}

std::string final_line(const TaskInstance& instance, std::string_view stated) {
  if (!instance.options.empty()) return "Therefore, option (" + std::string(stated) + ") is correct.";
  std::string line = "So the answer is: " + std::string(stated);
  if (line.back() != '.') line += '.';
  return line;
}

}  // namespace

std::string_view to_string(FaultMode mode) noexcept {
  switch (mode) {
    case FaultMode::none: return "none";
    case FaultMode::corrupt_conclusion: return "corrupt_conclusion";
  }
  return "?";
}

FaultMode parse_fault_mode(std::string_view name) {
  if (name == "none" || name.empty()) return FaultMode::none;
  if (name == "corrupt_conclusion") return FaultMode::corrupt_conclusion;
  throw Error(Errc::config, "unknown fault mode '" + std::string(name) + "'");
}

bool fault_selected(std::string_view instance_id, double rate) {
  if (rate >= 1.0) return true;
  if (rate <= 0.0) return false;
  const std::string digest = sha256_hex(instance_id);
  const double u = static_cast<double>(std::stoull(digest.substr(0, 13), nullptr, 16)) / 4503599627370496.0;  // 16^13
  return u < rate;
}

std::string corrupt_answer(const TaskInstance& instance, const StructuredSolution& solution) {
  if (solution.option) {
    const auto& options = instance.options;
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i].letter == *solution.option) return options[(i + 1) % options.size()].letter;
    }
  }
  if (solution.answer_kind == AnswerKind::relation) {
    const KinshipRelation actual = kinship(solution.answer);
    const auto next = static_cast<KinKind>(static_cast<int>(actual.kind) % static_cast<int>(KinKind::sibling_in_law) + 1);
    return KinshipRelation{next, actual.gender}.label();
  }
  if (auto n = text::parse_numeric_literal(solution.answer)) return text::format_number(*n + 1);
  for (const auto& block : solution.blocks) {
    for (const auto& t : block) {
      for (const std::string* e : {&t.subject, &t.object}) {
        if (!related_entities(*e, solution.answer) && !text::parse_numeric_literal(*e)) return *e;
      }
    }
  }
  return related_entities("nobody", solution.answer) ? "no one" : "nobody";
}

std::string render_transcript(const TaskInstance& instance, const StructuredSolution& solution,
                              std::optional<std::string> stated_override) {
  std::string out = "Let's create the knowledge graph.\n";
  std::size_t header = 0;
  for (std::size_t b = 0; b < solution.blocks.size(); ++b) {
    const auto& block = solution.blocks[b];
    if (!block.empty()) ++header;
    for (std::size_t i = 0; i < block.size(); ++i) {
      out += (i == 0 ? std::to_string(header) + ". " : std::string("   ")) + to_text(block[i]) + "\n";
    }
    if (b < solution.notes.size() && !solution.notes[b].empty()) out += solution.notes[b] + "\n";
  }
  out += to_text(solution.conclusion) + "\n";
  const std::string stated = stated_override ? *stated_override : (solution.option ? *solution.option : solution.answer);
  out += final_line(instance, stated) + "\n";
  return out;
}

CompletionResult mock_complete(const TaskInstance& instance, const MockConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const StructuredSolution solution = solve_structured(instance);
  std::optional<std::string> stated;
  if (config.fault == FaultMode::corrupt_conclusion && fault_selected(instance.id, config.fault_rate)) {
    stated = corrupt_answer(instance, solution);
  }
  CompletionResult result;
  result.text = render_transcript(instance, solution, stated);
  result.backend = BackendKind::mock;
  result.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

MockBackend::MockBackend(std::vector<TaskInstance> instances, MockConfig config) : config_(config) {
  for (auto& i : instances) {
    const std::string id = i.id;
    instances_.insert_or_assign(id, std::move(i));
  }
}

CompletionResult MockBackend::complete(const CompletionRequest& request) {
  request.validate();
  auto it = instances_.find(request.metadata.instance_id);
  if (it == instances_.end()) {
    throw Error(Errc::unsupported_task, "mock oracle knows no instance '" + request.metadata.instance_id + "'");
  }
  return mock_complete(it->second, config_);
}

}  // namespace sgp
