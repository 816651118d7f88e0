#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgp/kg.hpp"
#include "sgp/task.hpp"
#include "sgp/textgraph.hpp"

// Machine-readable task forms attached to TaskInstance::structured, and the
// deterministic solver that runs the matching strategy over them.
//
// Schemas (triples are [subject, relation, object] arrays):
//   relation_prediction        {"facts": [...], "query": [s, o]}          answer: s is o's <label>
//   dynamic_entity_prediction  {"initial": [...], "functional": [r...],
//                               "events": ["swap(a, b, r)", ...], "query": [entity, relation]}
//   complex_entity_prediction  {"facts": [...], "chain": {"anchor": e,
//                               "hops": [{"relation": r, "direction": "forward"|"inverse"}]}}
//   graph_sorting              {"objects": [...], "constraints": ["leftmost(a)", ...], "position": i}
//                              (i is 0-based from the left)
//   graph_query                {"facts": [...]} or {"table": csv, "class": c},
//                              plus "where": ["age>5", ...], "projection": "count"
//   logical_inference          {"facts": [...], "rules": ["IF ... THEN ..."], "goal": "(s, r, ?x)"}
namespace sgp {

struct StructuredSolution {
  std::string answer;                 // strategy output in display form
  AnswerKind answer_kind = AnswerKind::entity;
  std::optional<std::string> option;  // letter, when the instance lists options
  std::vector<std::vector<Triple>> blocks;  // the graph as built, then one block per step
  std::vector<std::string> notes;           // notes[i] follows blocks[i]
  Triple conclusion;                  // the fact that carries the answer
  AuditQuery audit;                   // conclusion with the answer slot opened
};

/// Runs the strategy for instance.task over instance.structured. Throws
/// Error(unsupported_task) when no structured form is attached,
/// Error(schema_mismatch) when it does not follow the schema, and the
/// strategy's own errors otherwise.
StructuredSolution solve_structured(const TaskInstance& instance);

/// The answer as the instance's gold kind: the option letter for option
/// tasks, the answer text otherwise.
std::string structured_gold(const TaskInstance& instance);

std::vector<Triple> triples_from_json(const nlohmann::json& array);
nlohmann::json triples_to_json(const std::vector<Triple>& triples);

}  // namespace sgp
