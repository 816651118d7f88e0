#include "sgp/structured.hpp"

#include "sgp/error.hpp"
#include "sgp/kinship.hpp"
#include "sgp/rules.hpp"
#include "sgp/strategies.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

using nlohmann::json;

constexpr std::string_view kPositionRelation = "is at position";
constexpr std::string_view kResultSubject = "query";
constexpr std::string_view kResultRelation = "has result";

[[noreturn]] void schema_error(const TaskInstance& instance, const std::string& what) {
  throw Error(Errc::schema_mismatch, "instance " + instance.id + ": " + what, {instance.id});
}

const json& field(const TaskInstance& instance, const json& s, const char* name) {
  if (!s.is_object() || !s.contains(name)) schema_error(instance, std::string("missing '") + name + "'");
  return s.at(name);
}

std::string string_field(const TaskInstance& instance, const json& s, const char* name) {
  const json& v = field(instance, s, name);
  if (!v.is_string()) schema_error(instance, std::string("'") + name + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const TaskInstance& instance, const json& s, const char* name) {
  const json& v = field(instance, s, name);
  if (!v.is_array()) schema_error(instance, std::string("'") + name + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) schema_error(instance, std::string("'") + name + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<Triple> facts_field(const TaskInstance& instance, const json& s, const char* name) {
  try {
    return triples_from_json(field(instance, s, name));
  } catch (const Error& e) {
    if (e.code() == Errc::schema_mismatch) schema_error(instance, std::string("'") + name + "': " + e.what());
    throw;
  }
}

KnowledgeGraph graph_of(const std::vector<Triple>& facts) {
  KnowledgeGraph kg;
  for (const auto& t : facts) kg.add(t);
  return kg;
}

void pick_option(const TaskInstance& instance, StructuredSolution& out) {
  if (instance.options.empty()) return;
  out.option = resolve_option(instance.options, out.answer, out.answer_kind);
  if (!out.option) {
    throw Error(Errc::validation, "instance " + instance.id + ": answer '" + out.answer + "' matches no option");
  }
}

StructuredSolution solve_relation(const TaskInstance& instance, const json& s) {
  const auto facts = facts_field(instance, s, "facts");
  const auto query = string_list(instance, s, "query");
  if (query.size() != 2) schema_error(instance, "'query' must be [subject, object]");
  const KnowledgeGraph kg = graph_of(facts);
  const KinshipInference inference = explain_relation(kg, query[0], query[1]);

  StructuredSolution out;
  out.answer = inference.relation.label();
  out.answer_kind = AnswerKind::relation;
  out.blocks.push_back(facts);
  out.notes.emplace_back("Start from " + kg.display_name(query[1]) + " and follow the path to " +
                         kg.display_name(query[0]) + ".");
  const std::string origin = kg.display_name(query[1]);
  for (const auto& step : inference.steps) {
    out.blocks.push_back({make_triple(origin, step.accumulated.label(), step.step.to)});
  }
  out.conclusion = make_triple(origin, out.answer, kg.display_name(query[0]));
  out.audit = AuditQuery{out.conclusion.subject, std::nullopt, out.conclusion.object};
  return out;
}

StructuredSolution solve_dynamic(const TaskInstance& instance, const json& s) {
  std::set<std::string> functional;
  if (s.contains("functional")) {
    for (const auto& r : string_list(instance, s, "functional")) functional.insert(text::canonical_relation(r));
  }
  KnowledgeGraph initial(functional);
  const auto facts = facts_field(instance, s, "initial");
  for (const auto& t : facts) initial.add(t);
  std::vector<Event> events;
  for (const auto& line : string_list(instance, s, "events")) events.push_back(parse_event(line));
  const auto query = string_list(instance, s, "query");
  if (query.size() != 2) schema_error(instance, "'query' must be [entity, relation]");

  const DynamicTrace trace = trace_dynamic(initial, events, DynamicQuery{query[0], query[1]});
  StructuredSolution out;
  out.answer = trace.answer;
  out.answer_kind = AnswerKind::entity;
  out.blocks.push_back(initial.triples());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const KnowledgeGraph& after = trace.series.snapshots()[i + 1];
    std::vector<Triple> changed;
    auto touched = [&](const std::string& entity, const std::string& relation) {
      for (const auto& value : after.objects(entity, relation)) {
        changed.push_back(make_triple(after.display_name(entity), relation, value, i + 1));
      }
    };
    if (const auto* swap = std::get_if<Swap>(&events[i])) {
      touched(swap->first, swap->relation);
      touched(swap->second, swap->relation);
    } else {
      const auto& assign = std::get<Assign>(events[i]);
      touched(assign.entity, assign.relation);
    }
    out.blocks.push_back(std::move(changed));
    out.notes.push_back("After " + to_text(events[i]) + ":");
  }
  const KnowledgeGraph& final_state = trace.series.current();
  out.conclusion = make_triple(final_state.display_name(query[0]), query[1], out.answer);
  out.audit = AuditQuery{out.conclusion.subject, out.conclusion.relation, std::nullopt};
  pick_option(instance, out);
  return out;
}

StructuredSolution solve_complex(const TaskInstance& instance, const json& s) {
  const auto facts = facts_field(instance, s, "facts");
  const json& chain = field(instance, s, "chain");
  ChainQuery query{string_field(instance, chain, "anchor"), {}};
  const json& hops = field(instance, chain, "hops");
  if (!hops.is_array()) schema_error(instance, "'hops' must be an array");
  for (const auto& hop : hops) {
    const std::string direction = hop.contains("direction") ? string_field(instance, hop, "direction") : "forward";
    if (direction != "forward" && direction != "inverse") schema_error(instance, "bad hop direction " + direction);
    query.hops.push_back({string_field(instance, hop, "relation"),
                          direction == "forward" ? Direction::forward : Direction::inverse});
  }
  const KnowledgeGraph kg = graph_of(facts);
  const auto visited = trace_chain(kg, query);

  StructuredSolution out;
  out.answer = visited.back();
  out.answer_kind = AnswerKind::entity;
  out.blocks.push_back(facts);
  out.notes.emplace_back("Resolve the sub-questions one hop at a time.");
  for (std::size_t i = 0; i < query.hops.size(); ++i) {
    const auto& hop = query.hops[i];
    Triple t = hop.direction == Direction::forward ? make_triple(visited[i], hop.relation, visited[i + 1])
                                                   : make_triple(visited[i + 1], hop.relation, visited[i]);
    out.blocks.push_back({t});
    out.conclusion = std::move(t);
  }
  const auto& last = query.hops.back();
  out.audit = last.direction == Direction::forward
                  ? AuditQuery{out.conclusion.subject, out.conclusion.relation, std::nullopt}
                  : AuditQuery{std::nullopt, out.conclusion.relation, out.conclusion.object};
  pick_option(instance, out);
  return out;
}

Triple constraint_triple(const OrderConstraint& c) {
  switch (c.kind) {
    case OrderConstraint::Kind::left_of: return make_triple(c.a, "is left of", c.b);
    case OrderConstraint::Kind::right_of: return make_triple(c.a, "is right of", c.b);
    case OrderConstraint::Kind::leftmost: return make_triple(c.a, "is", "leftmost");
    case OrderConstraint::Kind::rightmost: return make_triple(c.a, "is", "rightmost");
    case OrderConstraint::Kind::at_position:
      return make_triple(c.a, kPositionRelation, std::to_string(c.index + 1));
  }
  throw Error(Errc::validation, "unknown constraint kind");
}

StructuredSolution solve_sorting(const TaskInstance& instance, const json& s) {
  const auto objects = string_list(instance, s, "objects");
  std::vector<OrderConstraint> constraints;
  for (const auto& line : string_list(instance, s, "constraints")) constraints.push_back(parse_constraint(line));
  const json& position = field(instance, s, "position");
  if (!position.is_number_unsigned() && !position.is_number_integer()) {
    schema_error(instance, "'position' must be an integer");
  }
  const auto order = sort_order(objects, constraints);
  const auto index = position.get<long long>();
  if (index < 0 || static_cast<std::size_t>(index) >= order.size()) {
    schema_error(instance, "'position' out of range");
  }

  StructuredSolution out;
  out.answer = order[static_cast<std::size_t>(index)];
  out.answer_kind = AnswerKind::entity;
  std::vector<Triple> stated;
  for (const auto& c : constraints) stated.push_back(constraint_triple(c));
  out.blocks.push_back(std::move(stated));
  out.notes.emplace_back("Sort the objects from left to right.");
  std::vector<Triple> placed;
  for (std::size_t i = 0; i < order.size(); ++i) {
    placed.push_back(make_triple(order[i], kPositionRelation, std::to_string(i + 1)));
  }
  out.blocks.push_back(std::move(placed));
  out.conclusion = make_triple(out.answer, kPositionRelation, std::to_string(index + 1));
  out.audit = AuditQuery{std::nullopt, out.conclusion.relation, out.conclusion.object};
  pick_option(instance, out);
  return out;
}

StructuredSolution solve_query(const TaskInstance& instance, const json& s) {
  KnowledgeGraph kg;
  FilterPredicate predicate;
  if (s.contains("table")) {
    const std::string row_class = s.contains("class") ? string_field(instance, s, "class") : "";
    kg = graph_from_table(string_field(instance, s, "table"), row_class);
    if (!row_class.empty()) predicate.of_class = row_class;
  } else {
    kg = graph_of(facts_field(instance, s, "facts"));
    if (s.contains("class")) predicate.of_class = string_field(instance, s, "class");
  }
  if (s.contains("where")) {
    for (const auto& c : string_list(instance, s, "where")) predicate.conjuncts.push_back(parse_conjunct(c));
  }
  predicate.projection = parse_projection(string_field(instance, s, "projection"));
  const QueryResult result = run_graph_query(kg, predicate);

  StructuredSolution out;
  out.answer = result.text();
  out.answer_kind = predicate.projection.kind == Projection::Kind::count ? AnswerKind::number : AnswerKind::entity;
  out.blocks.push_back(kg.triples());
  std::string filter;
  for (const auto& c : predicate.conjuncts) {
    filter += (filter.empty() ? "" : " and ") + c.attribute + " " + std::string(to_string(c.cmp)) + " " + c.value;
  }
  out.notes.push_back(filter.empty() ? std::string("Select every object:") : "Select the objects where " + filter + ":");
  const auto& kind = predicate.projection.kind;
  const bool arg_sort = kind == Projection::Kind::arg_sort_last || kind == Projection::Kind::arg_sort_first;
  FilterPredicate selection = predicate;
  selection.projection = Projection{Projection::Kind::set, {}};
  std::vector<Triple> matches;
  for (const auto& e : arg_sort ? run_graph_query(kg, selection).entities : result.entities) {
    matches.push_back(make_triple(e, "matches", "query"));
  }
  out.blocks.push_back(std::move(matches));
  if (arg_sort) {
    out.notes.push_back("Order the matches by " + predicate.projection.attribute + " and take the " +
                        (kind == Projection::Kind::arg_sort_last ? "last" : "first") + " one.");
  }
  out.conclusion = make_triple(kResultSubject, kResultRelation, out.answer);
  out.audit = AuditQuery{out.conclusion.subject, out.conclusion.relation, std::nullopt};
  pick_option(instance, out);
  return out;
}

StructuredSolution solve_logical(const TaskInstance& instance, const json& s) {
  const auto facts = facts_field(instance, s, "facts");
  std::vector<Rule> rules;
  for (const auto& line : string_list(instance, s, "rules")) rules.push_back(parse_rule(line));
  const FactPattern goal = parse_pattern(string_field(instance, s, "goal"));
  const int open = goal.subject.variable + goal.relation.variable + goal.object.variable;
  if (open != 1) schema_error(instance, "'goal' must have exactly one variable slot");

  const Derivation derivation = forward_chain(facts, rules, goal);
  StructuredSolution out;
  out.answer = derivation.answer(goal);
  out.answer_kind = AnswerKind::entity;
  out.blocks.push_back(facts);
  out.notes.emplace_back("Chain forward from the facts.");
  for (const auto& firing : derivation.firings) {
    out.blocks.push_back({firing.derived});
  }
  out.conclusion = derivation.goal_fact;
  out.audit = AuditQuery{goal.subject.variable ? std::nullopt : std::optional(out.conclusion.subject),
                         goal.relation.variable ? std::nullopt : std::optional(out.conclusion.relation),
                         goal.object.variable ? std::nullopt : std::optional(out.conclusion.object)};
  pick_option(instance, out);
  return out;
}

}  // namespace

std::vector<Triple> triples_from_json(const json& array) {
  if (!array.is_array()) throw Error(Errc::schema_mismatch, "triples must be an array");
  std::vector<Triple> out;
  for (const auto& item : array) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_string() || !item[1].is_string() ||
        !item[2].is_string()) {
      throw Error(Errc::schema_mismatch, "each triple must be [subject, relation, object]");
    }
    out.push_back(make_triple(item[0].get<std::string>(), item[1].get<std::string>(), item[2].get<std::string>()));
  }
  return out;
}

json triples_to_json(const std::vector<Triple>& triples) {
  json out = json::array();
  for (const auto& t : triples) out.push_back({t.subject, t.relation, t.object});
  return out;
}

StructuredSolution solve_structured(const TaskInstance& instance) {
  if (!instance.structured) {
    throw Error(Errc::unsupported_task, "instance " + instance.id + " carries no structured form", {instance.id});
  }
  const json& s = *instance.structured;
  switch (instance.task) {
    case TaskKind::relation_prediction: return solve_relation(instance, s);
    case TaskKind::dynamic_entity_prediction: return solve_dynamic(instance, s);
    case TaskKind::complex_entity_prediction: return solve_complex(instance, s);
    case TaskKind::graph_sorting: return solve_sorting(instance, s);
    case TaskKind::graph_query: return solve_query(instance, s);
    case TaskKind::logical_inference: return solve_logical(instance, s);
  }
  throw Error(Errc::unsupported_task, "no strategy for this task");
}

std::string structured_gold(const TaskInstance& instance) {
  const StructuredSolution solution = solve_structured(instance);
  return solution.option ? *solution.option : solution.answer;
}

}  // namespace sgp
