#include "sgp/error.hpp"
#include "sgp/strategies.hpp"
#include "sgp/text.hpp"

namespace sgp {

DynamicTrace trace_dynamic(const KnowledgeGraph& initial, std::span<const Event> events, const DynamicQuery& query) {
  DynamicSeries series(initial);
  for (std::size_t i = 0; i < events.size(); ++i) {
    try {
      series.apply(events[i]);
    } catch (const Error& e) {
      if (e.code() != Errc::invalid_event) throw;
      throw Error(Errc::invalid_event, "step " + std::to_string(i + 1) + " (" + to_text(events[i]) + "): " + e.what(),
                  {std::to_string(i + 1)});
    }
  }
  const auto values = series.current().objects(query.entity, query.relation);
  if (values.empty()) {
    throw Error(Errc::unanswerable, query.entity + " has no value under '" + query.relation + "'");
  }
  if (values.size() > 1) throw Error(Errc::ambiguous, query.entity + " holds several values", values);
  std::string answer = values.front();
  return DynamicTrace{std::move(series), std::move(answer)};
}

std::string track_dynamic(const KnowledgeGraph& initial, std::span<const Event> events, const DynamicQuery& query) {
  return trace_dynamic(initial, events, query).answer;
}

std::vector<std::string> trace_chain(const KnowledgeGraph& kg, const ChainQuery& query) {
  if (query.hops.empty()) throw Error(Errc::validation, "chain query needs at least one hop");
  if (!kg.has_entity(query.anchor)) throw Error(Errc::entity_not_found, "anchor not in graph: " + query.anchor);
  std::vector<std::string> visited{kg.display_name(query.anchor)};
  for (const auto& hop : query.hops) {
    const std::string& at = visited.back();
    auto next = hop.direction == Direction::forward ? kg.objects(at, hop.relation) : kg.subjects(hop.relation, at);
    const std::string where = "'" + text::canonical_relation(hop.relation) + "' from " + at;
    if (next.empty()) throw Error(Errc::unanswerable, "no entity reached by " + where);
    if (next.size() > 1) throw Error(Errc::ambiguous, "several entities reached by " + where, next);
    visited.push_back(next.front());
  }
  return visited;
}

std::string resolve_chain(const KnowledgeGraph& kg, const ChainQuery& query) { return trace_chain(kg, query).back(); }

}  // namespace sgp
