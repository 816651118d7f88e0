#include "sgp/kg.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <tuple>

#include "sgp/error.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

bool has_separator(std::string_view s) { return s.find_first_of(",\n\r") != std::string_view::npos; }

}  // namespace

Triple make_triple(std::string_view subject, std::string_view relation, std::string_view object,
                   std::optional<std::size_t> timestep) {
  Triple t{text::collapse_whitespace(subject), text::canonical_relation(relation), text::collapse_whitespace(object),
           timestep};
  if (t.subject.empty() || t.relation.empty() || t.object.empty()) {
    throw Error(Errc::validation, "triple needs a subject, relation and object: (" + std::string(subject) + ", " +
                                      std::string(relation) + ", " + std::string(object) + ")");
  }
  if (has_separator(t.subject) || has_separator(t.relation) || t.object.find_first_of("\n\r") != std::string::npos) {
    throw Error(Errc::validation, "separator inside triple field: " + to_text(t));
  }
  return t;
}

std::string to_text(const Triple& triple) {
  std::string out;
  if (triple.timestep) out = "t=" + std::to_string(*triple.timestep) + ": ";
  out += "(" + triple.subject + ", " + triple.relation + ", " + triple.object + ")";
  return out;
}

std::ostream& operator<<(std::ostream& os, const Triple& triple) { return os << to_text(triple); }

bool same_fact(const Triple& a, const Triple& b) {
  return text::entity_key(a.subject) == text::entity_key(b.subject) && a.relation == b.relation &&
         text::entity_key(a.object) == text::entity_key(b.object);
}

KnowledgeGraph::KnowledgeGraph(std::set<std::string> functional_relations) {
  for (const auto& r : functional_relations) declare_functional(r);
}

void KnowledgeGraph::declare_functional(std::string_view relation) {
  functional_.insert(text::canonical_relation(relation));
}

bool KnowledgeGraph::is_functional(std::string_view relation) const {
  return functional_.contains(text::canonical_relation(relation));
}

void KnowledgeGraph::remember_entity(const std::string& name) {
  std::string key = text::entity_key(name);
  if (display_.emplace(key, name).second) entity_order_.push_back(std::move(key));
}

void KnowledgeGraph::add(const Triple& triple) {
  const Triple t = make_triple(triple.subject, triple.relation, triple.object, triple.timestep);
  if (contains(t)) return;
  remember_entity(t.subject);
  remember_entity(t.object);
  if (is_functional(t.relation)) {
    reassign(t.subject, t.relation, t.object, t.timestep);
    return;
  }
  triples_.push_back(t);
  const std::size_t ordinal = triples_.size() - 1;
  out_[text::entity_key(t.subject)].push_back({t.relation, display_name(t.object), ordinal});
  in_[text::entity_key(t.object)].push_back({t.relation, display_name(t.subject), ordinal});
}

void KnowledgeGraph::reassign(std::string_view subject, std::string_view relation, std::string_view object,
                              std::optional<std::size_t> timestep) {
  Triple t = make_triple(subject, relation, object, timestep);
  remember_entity(t.subject);
  remember_entity(t.object);
  const std::string subject_key = text::entity_key(t.subject);

  std::optional<std::size_t> slot;
  std::vector<Triple> kept;
  kept.reserve(triples_.size() + 1);
  for (auto& existing : triples_) {
    if (text::entity_key(existing.subject) == subject_key && existing.relation == t.relation) {
      if (!slot) {
        slot = kept.size();
        kept.push_back(t);
      }
      if (!same_fact(existing, t)) superseded_.push_back(existing);
      continue;
    }
    kept.push_back(std::move(existing));
  }
  if (!slot) kept.push_back(std::move(t));
  triples_ = std::move(kept);
  rebuild_indexes();
}

void KnowledgeGraph::rebuild_indexes() {
  out_.clear();
  in_.clear();
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const auto& t = triples_[i];
    out_[text::entity_key(t.subject)].push_back({t.relation, display_name(t.object), i});
    in_[text::entity_key(t.object)].push_back({t.relation, display_name(t.subject), i});
  }
}

bool KnowledgeGraph::contains(const Triple& triple) const {
  auto it = out_.find(text::entity_key(triple.subject));
  if (it == out_.end()) return false;
  const std::string relation = text::canonical_relation(triple.relation);
  const std::string object = text::entity_key(triple.object);
  return std::any_of(it->second.begin(), it->second.end(), [&](const Edge& e) {
    return e.relation == relation && text::entity_key(e.other) == object;
  });
}

bool KnowledgeGraph::has_entity(std::string_view entity) const {
  const std::string key = text::entity_key(entity);
  return out_.contains(key) || in_.contains(key);
}

std::vector<std::string> KnowledgeGraph::objects(std::string_view subject, std::string_view relation) const {
  std::vector<std::string> result;
  const std::string rel = text::canonical_relation(relation);
  for (const auto& e : out_edges(subject)) {
    if (e.relation == rel) result.push_back(e.other);
  }
  return result;
}

std::vector<std::string> KnowledgeGraph::subjects(std::string_view relation, std::string_view object) const {
  std::vector<std::string> result;
  const std::string rel = text::canonical_relation(relation);
  for (const auto& e : in_edges(object)) {
    if (e.relation == rel) result.push_back(e.other);
  }
  return result;
}

std::span<const KnowledgeGraph::Edge> KnowledgeGraph::out_edges(std::string_view entity) const {
  auto it = out_.find(text::entity_key(entity));
  if (it == out_.end()) return {};
  return it->second;
}

std::span<const KnowledgeGraph::Edge> KnowledgeGraph::in_edges(std::string_view entity) const {
  auto it = in_.find(text::entity_key(entity));
  if (it == in_.end()) return {};
  return it->second;
}

std::string KnowledgeGraph::display_name(std::string_view entity) const {
  auto it = display_.find(text::entity_key(entity));
  return it == display_.end() ? std::string(text::trim(entity)) : it->second;
}

std::vector<std::string> KnowledgeGraph::entities() const {
  std::vector<std::string> result;
  for (const auto& key : entity_order_) {
    if (out_.contains(key) || in_.contains(key)) result.push_back(display_.at(key));
  }
  return result;
}

std::vector<std::string> KnowledgeGraph::subject_entities() const {
  std::vector<std::string> result;
  for (const auto& key : entity_order_) {
    if (out_.contains(key)) result.push_back(display_.at(key));
  }
  return result;
}

bool KnowledgeGraph::indexes_consistent() const {
  KnowledgeGraph copy = *this;
  copy.rebuild_indexes();
  auto same = [](const auto& lhs, const auto& rhs) {
    if (lhs.size() != rhs.size()) return false;
    for (const auto& [key, edges] : lhs) {
      auto it = rhs.find(key);
      if (it == rhs.end() || it->second.size() != edges.size()) return false;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& a = edges[i];
        const auto& b = it->second[i];
        if (a.relation != b.relation || text::entity_key(a.other) != text::entity_key(b.other) ||
            a.ordinal != b.ordinal) {
          return false;
        }
      }
    }
    return true;
  };
  return same(out_, copy.out_) && same(in_, copy.in_);
}

std::set<std::tuple<std::string, std::string, std::string>> KnowledgeGraph::fact_keys() const {
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  for (const auto& t : triples_) keys.emplace(text::entity_key(t.subject), t.relation, text::entity_key(t.object));
  return keys;
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) { return a.fact_keys() == b.fact_keys(); }

KnowledgeGraph add_fact(KnowledgeGraph kg, const Triple& triple) {
  kg.add(triple);
  return kg;
}

std::vector<PathStep> find_path(const KnowledgeGraph& kg, std::string_view s, std::string_view o) {
  if (!kg.has_entity(s)) throw Error(Errc::entity_not_found, "entity not in graph: " + std::string(s));
  if (!kg.has_entity(o)) throw Error(Errc::entity_not_found, "entity not in graph: " + std::string(o));
  const std::string source = text::entity_key(s);
  const std::string target = text::entity_key(o);
  if (source == target) return {};

  struct Arrival {
    std::string parent;
    PathStep step;
  };
  std::unordered_map<std::string, Arrival> arrived;
  std::deque<std::string> frontier{source};
  arrived.emplace(source, Arrival{});

  struct Neighbor {
    std::size_t ordinal;
    int side;  // 0 = forward (outgoing), 1 = inverse (incoming)
    const KnowledgeGraph::Edge* edge;
  };

  while (!frontier.empty()) {
    const std::string current = frontier.front();
    frontier.pop_front();
    std::vector<Neighbor> neighbors;
    for (const auto& e : kg.out_edges(current)) neighbors.push_back({e.ordinal, 0, &e});
    for (const auto& e : kg.in_edges(current)) neighbors.push_back({e.ordinal, 1, &e});
    std::sort(neighbors.begin(), neighbors.end(),
              [](const Neighbor& a, const Neighbor& b) { return std::tie(a.ordinal, a.side) < std::tie(b.ordinal, b.side); });

    for (const auto& n : neighbors) {
      const std::string next = text::entity_key(n.edge->other);
      if (arrived.contains(next)) continue;
      PathStep step{kg.display_name(current), n.edge->other, n.edge->relation,
                    n.side == 0 ? Direction::forward : Direction::inverse};
      arrived.emplace(next, Arrival{current, std::move(step)});
      if (next == target) {
        std::vector<PathStep> path;
        for (std::string at = target; at != source; at = arrived.at(at).parent) path.push_back(arrived.at(at).step);
        std::reverse(path.begin(), path.end());
        return path;
      }
      frontier.push_back(next);
    }
  }
  throw Error(Errc::no_path, "no path between " + std::string(s) + " and " + std::string(o));
}

}  // namespace sgp
