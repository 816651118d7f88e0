#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

namespace sgp {

/// One (subject, relation, object) fact, optionally stamped with the story
/// step that asserted it.
///
/// Built through make_triple(), which trims the entities and stores the
/// relation in canonical form. Subject and relation may not contain commas
/// or newlines so that the "(s, r, o)" text form is unambiguous; the object
/// may contain commas ("Poole, Dorset").
struct Triple {
  std::string subject;
  std::string relation;
  std::string object;
  std::optional<std::size_t> timestep;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Throws Error(validation) on an empty subject/relation/object or a
/// separator character inside subject or relation.
Triple make_triple(std::string_view subject, std::string_view relation, std::string_view object,
                   std::optional<std::size_t> timestep = std::nullopt);

/// "(subject, relation, object)", prefixed with "t=N: " when stamped.
std::string to_text(const Triple& triple);
std::ostream& operator<<(std::ostream& os, const Triple& triple);

/// Same fact modulo entity casing and timestep.
bool same_fact(const Triple& a, const Triple& b);

enum class Direction { forward, inverse };

/// One hop of a path. forward: the graph states (from, relation, to);
/// inverse: the graph states (to, relation, from).
struct PathStep {
  std::string from;
  std::string to;
  std::string relation;
  Direction direction = Direction::forward;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

class KnowledgeGraph {
 public:
  struct Edge {
    std::string relation;
    std::string other;    // display name of the entity at the far end
    std::size_t ordinal;  // position of the backing triple in triples()
  };

  KnowledgeGraph() = default;
  explicit KnowledgeGraph(std::set<std::string> functional_relations);

  /// Relations under which each subject holds at most one current object.
  void declare_functional(std::string_view relation);
  [[nodiscard]] bool is_functional(std::string_view relation) const;
  [[nodiscard]] const std::set<std::string>& functional_relations() const noexcept { return functional_; }

  /// Adds a fact. Identical facts are ignored. For a functional relation the
  /// prior (subject, relation, *) fact is superseded: it moves to the
  /// provenance log and the new fact takes over its position.
  void add(const Triple& triple);

  /// Replaces every current (subject, relation, *) fact by one pointing at
  /// `object`, regardless of functionality. Used by Assign and Swap events.
  void reassign(std::string_view subject, std::string_view relation, std::string_view object,
                std::optional<std::size_t> timestep = std::nullopt);

  [[nodiscard]] const std::vector<Triple>& triples() const noexcept { return triples_; }
  [[nodiscard]] const std::vector<Triple>& provenance() const noexcept { return superseded_; }
  [[nodiscard]] std::size_t size() const noexcept { return triples_.size(); }
  [[nodiscard]] bool empty() const noexcept { return triples_.empty(); }

  [[nodiscard]] bool contains(const Triple& triple) const;
  [[nodiscard]] bool has_entity(std::string_view entity) const;

  /// Objects of (subject, relation, *) in insertion order.
  [[nodiscard]] std::vector<std::string> objects(std::string_view subject, std::string_view relation) const;
  /// Subjects of (*, relation, object) in insertion order.
  [[nodiscard]] std::vector<std::string> subjects(std::string_view relation, std::string_view object) const;

  [[nodiscard]] std::span<const Edge> out_edges(std::string_view entity) const;
  [[nodiscard]] std::span<const Edge> in_edges(std::string_view entity) const;

  /// First-seen casing of an entity; the input itself when unknown.
  [[nodiscard]] std::string display_name(std::string_view entity) const;

  /// Current entities in first-seen order.
  [[nodiscard]] std::vector<std::string> entities() const;

  /// Entities that occur as a subject of some current fact, first-seen order.
  [[nodiscard]] std::vector<std::string> subject_entities() const;

  /// Recomputes both indexes from the triple list and compares.
  [[nodiscard]] bool indexes_consistent() const;

  /// Equality of the current fact sets (entity casing, order, timesteps and
  /// provenance are ignored).
  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

 private:
  void remember_entity(const std::string& name);
  void rebuild_indexes();
  [[nodiscard]] std::set<std::tuple<std::string, std::string, std::string>> fact_keys() const;

  std::vector<Triple> triples_;
  std::vector<Triple> superseded_;
  std::set<std::string> functional_;
  std::unordered_map<std::string, std::vector<Edge>> out_;
  std::unordered_map<std::string, std::vector<Edge>> in_;
  std::vector<std::string> entity_order_;                     // keys, first-seen
  std::unordered_map<std::string, std::string> display_;      // key -> display
};

/// Value-semantics form of KnowledgeGraph::add.
[[nodiscard]] KnowledgeGraph add_fact(KnowledgeGraph kg, const Triple& triple);

/// Shortest undirected path from s to o. Edges are traversable both ways and
/// the traversal direction is recorded. Among equally short paths the one
/// using earlier-inserted edges wins. Empty iff s and o are the same entity.
/// Throws Error(entity_not_found) or Error(no_path).
[[nodiscard]] std::vector<PathStep> find_path(const KnowledgeGraph& kg, std::string_view s, std::string_view o);

// ---------------------------------------------------------------------------
// Dynamic graphs

struct Assign {
  std::string entity;
  std::string relation;
  std::string value;
  friend bool operator==(const Assign&, const Assign&) = default;
};

struct Swap {
  std::string first;
  std::string second;
  std::string relation;
  friend bool operator==(const Swap&, const Swap&) = default;
};

using Event = std::variant<Assign, Swap>;

/// "assign(entity, relation, value)" / "swap(first, second, relation)"
std::string to_text(const Event& event);

/// Parses the form produced by to_text. Throws Error(validation).
Event parse_event(std::string_view line);

/// Applies one event to a snapshot. A Swap needs both entities to hold
/// exactly one current value under the relation, else Error(invalid_event).
[[nodiscard]] KnowledgeGraph apply_event(const KnowledgeGraph& snapshot, const Event& event,
                                         std::optional<std::size_t> timestep = std::nullopt);

/// Ordered snapshots; snapshots().size() == events().size() + 1 always.
class DynamicSeries {
 public:
  explicit DynamicSeries(KnowledgeGraph initial);

  void apply(const Event& event);

  [[nodiscard]] const std::vector<KnowledgeGraph>& snapshots() const noexcept { return snapshots_; }
  [[nodiscard]] const std::vector<Event>& events() const noexcept { return events_; }
  [[nodiscard]] const KnowledgeGraph& current() const noexcept { return snapshots_.back(); }

 private:
  std::vector<KnowledgeGraph> snapshots_;
  std::vector<Event> events_;
};

[[nodiscard]] DynamicSeries apply_event(DynamicSeries series, const Event& event);

}  // namespace sgp
