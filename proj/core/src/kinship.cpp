#include "sgp/kinship.hpp"

#include <algorithm>
#include <map>

#include "sgp/error.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

using K = KinKind;

struct LabelEntry {
  std::string_view label;
  KinKind kind;
  Gender gender;
};

constexpr LabelEntry kLabels[] = {
    {"father", K::parent, Gender::male},
    {"mother", K::parent, Gender::female},
    {"son", K::child, Gender::male},
    {"daughter", K::child, Gender::female},
    {"brother", K::sibling, Gender::male},
    {"sister", K::sibling, Gender::female},
    {"husband", K::spouse, Gender::male},
    {"wife", K::spouse, Gender::female},
    {"grandfather", K::grandparent, Gender::male},
    {"grandmother", K::grandparent, Gender::female},
    {"grandson", K::grandchild, Gender::male},
    {"granddaughter", K::grandchild, Gender::female},
    {"uncle", K::pibling, Gender::male},
    {"aunt", K::pibling, Gender::female},
    {"nephew", K::nibling, Gender::male},
    {"niece", K::nibling, Gender::female},
    {"cousin", K::cousin, Gender::unknown},
    {"father-in-law", K::parent_in_law, Gender::male},
    {"mother-in-law", K::parent_in_law, Gender::female},
    {"son-in-law", K::child_in_law, Gender::male},
    {"daughter-in-law", K::child_in_law, Gender::female},
    {"brother-in-law", K::sibling_in_law, Gender::male},
    {"sister-in-law", K::sibling_in_law, Gender::female},
};

constexpr LabelEntry kNeutral[] = {
    {"self", K::self, Gender::unknown},
    {"parent", K::parent, Gender::unknown},
    {"child", K::child, Gender::unknown},
    {"sibling", K::sibling, Gender::unknown},
    {"spouse", K::spouse, Gender::unknown},
    {"grandparent", K::grandparent, Gender::unknown},
    {"grandchild", K::grandchild, Gender::unknown},
    {"pibling", K::pibling, Gender::unknown},
    {"nibling", K::nibling, Gender::unknown},
    {"cousin", K::cousin, Gender::unknown},
    {"parent-in-law", K::parent_in_law, Gender::unknown},
    {"child-in-law", K::child_in_law, Gender::unknown},
    {"sibling-in-law", K::sibling_in_law, Gender::unknown},
};

KinSignature base_signature(KinKind kind) {
  switch (kind) {
    case K::self: return {0, 0, false};
    case K::parent: return {1, 0, false};
    case K::child: return {-1, 0, false};
    case K::sibling: return {0, 1, false};
    case K::spouse: return {0, 0, true};
    case K::grandparent: return {2, 0, false};
    case K::grandchild: return {-2, 0, false};
    case K::pibling: return {1, 1, false};
    case K::nibling: return {-1, 1, false};
    case K::cousin: return {0, 2, false};
    case K::parent_in_law: return {1, 0, true};
    case K::child_in_law: return {-1, 0, true};
    case K::sibling_in_law: return {0, 1, true};
  }
  return {};
}

// (first, second) -> result kind. Pairs absent here are Undefined; self is
// handled separately as the identity.
const std::map<std::pair<KinKind, KinKind>, KinKind>& composition_table() {
  static const std::map<std::pair<KinKind, KinKind>, KinKind> table = {
      {{K::parent, K::parent}, K::grandparent},
      {{K::parent, K::child}, K::sibling},
      {{K::parent, K::sibling}, K::pibling},
      {{K::parent, K::spouse}, K::parent},
      {{K::parent, K::nibling}, K::cousin},
      {{K::parent, K::parent_in_law}, K::grandparent},

      {{K::child, K::parent}, K::spouse},
      {{K::child, K::child}, K::grandchild},
      {{K::child, K::sibling}, K::child},
      {{K::child, K::spouse}, K::child_in_law},
      {{K::child, K::nibling}, K::grandchild},

      {{K::sibling, K::parent}, K::parent},
      {{K::sibling, K::child}, K::nibling},
      {{K::sibling, K::sibling}, K::sibling},
      {{K::sibling, K::spouse}, K::sibling_in_law},
      {{K::sibling, K::grandparent}, K::grandparent},
      {{K::sibling, K::pibling}, K::pibling},
      {{K::sibling, K::cousin}, K::cousin},

      {{K::spouse, K::parent}, K::parent_in_law},
      {{K::spouse, K::child}, K::child},
      {{K::spouse, K::sibling}, K::sibling_in_law},
      {{K::spouse, K::grandchild}, K::grandchild},
      {{K::spouse, K::parent_in_law}, K::parent},
      {{K::spouse, K::child_in_law}, K::child_in_law},

      {{K::grandparent, K::spouse}, K::grandparent},
      {{K::grandchild, K::sibling}, K::grandchild},

      // A pibling's sibling is taken to be another pibling, never the
      // reference person's own parent.
      {{K::pibling, K::parent}, K::grandparent},
      {{K::pibling, K::child}, K::cousin},
      {{K::pibling, K::sibling}, K::pibling},

      {{K::nibling, K::sibling}, K::nibling},
      {{K::cousin, K::sibling}, K::cousin},
      {{K::parent_in_law, K::spouse}, K::parent_in_law},

      {{K::child_in_law, K::spouse}, K::child},
      {{K::child_in_law, K::child}, K::grandchild},
      {{K::child_in_law, K::parent_in_law}, K::spouse},
  };
  return table;
}

KinKind inverse_kind(KinKind kind) {
  switch (kind) {
    case K::parent: return K::child;
    case K::child: return K::parent;
    case K::grandparent: return K::grandchild;
    case K::grandchild: return K::grandparent;
    case K::pibling: return K::nibling;
    case K::nibling: return K::pibling;
    case K::parent_in_law: return K::child_in_law;
    case K::child_in_law: return K::parent_in_law;
    default: return kind;
  }
}

std::string compact(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '-') out.push_back(c);
  }
  return out;
}

}  // namespace

std::string KinshipRelation::label() const {
  if (gender != Gender::unknown) {
    for (const auto& e : kLabels) {
      if (e.kind == kind && e.gender == gender) return std::string(e.label);
    }
  }
  for (const auto& e : kNeutral) {
    if (e.kind == kind) return std::string(e.label);
  }
  return "self";
}

KinSignature KinshipRelation::signature() const {
  KinSignature sig = base_signature(kind);
  sig.gender = gender;
  return sig;
}

const std::vector<std::string>& kinship_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const auto& e : kLabels) out.emplace_back(e.label);
    return out;
  }();
  return labels;
}

const std::vector<std::string>& neutral_kinship_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const auto& e : kNeutral) {
      if (e.kind != K::self) out.emplace_back(e.label);
    }
    return out;
  }();
  return labels;
}

std::optional<KinshipRelation> parse_kinship(std::string_view label) {
  std::string canon = text::canonical_relation(label);
  if (canon.starts_with("has ")) canon.erase(0, 4);
  if (canon.starts_with("is ")) canon.erase(0, 3);
  if (canon.ends_with(" of")) canon.erase(canon.size() - 3);
  const std::string key = compact(canon);
  for (const auto& e : kLabels) {
    if (compact(e.label) == key) return KinshipRelation{e.kind, e.gender};
  }
  for (const auto& e : kNeutral) {
    if (compact(e.label) == key) return KinshipRelation{e.kind, e.gender};
  }
  return std::nullopt;
}

KinshipRelation kinship(std::string_view label) {
  if (auto r = parse_kinship(label)) return *r;
  throw Error(Errc::validation, "not a kinship relation: " + std::string(label));
}

bool composable(KinKind first, KinKind second) noexcept {
  if (first == K::self || second == K::self) return true;
  return composition_table().contains({first, second});
}

KinshipRelation compose_kinship(const KinshipRelation& r_ab, const KinshipRelation& r_bc) {
  if (r_ab.kind == K::self) return r_bc;
  if (r_bc.kind == K::self) return KinshipRelation{r_ab.kind, r_ab.gender};
  const auto& table = composition_table();
  auto it = table.find({r_ab.kind, r_bc.kind});
  if (it == table.end()) {
    throw Error(Errc::undefined_composition,
                "relation not determinable: " + r_ab.label() + " then " + r_bc.label());
  }
  return KinshipRelation{it->second, r_bc.gender};
}

KinshipRelation inverse(const KinshipRelation& r, Gender gender) { return {inverse_kind(r.kind), gender}; }

std::unordered_map<std::string, Gender> infer_genders(const KnowledgeGraph& kg) {
  std::unordered_map<std::string, Gender> genders;
  for (const auto& t : kg.triples()) {
    auto r = parse_kinship(t.relation);
    if (r && r->gender != Gender::unknown) genders.emplace(text::entity_key(t.object), r->gender);
  }
  return genders;
}

KinshipInference explain_relation(const KnowledgeGraph& kg, std::string_view s, std::string_view o) {
  const auto genders = infer_genders(kg);
  auto gender_of = [&](const std::string& entity) {
    auto it = genders.find(text::entity_key(entity));
    return it == genders.end() ? Gender::unknown : it->second;
  };

  std::vector<PathStep> path = find_path(kg, o, s);
  KinshipInference result;
  KinshipRelation acc{};
  for (auto& step : path) {
    const KinshipRelation stated = kinship(step.relation);
    // forward: (from, L, to) so `to` is from's L; inverse: from is to's L.
    KinshipRelation hop =
        step.direction == Direction::forward
            ? KinshipRelation{stated.kind, stated.gender != Gender::unknown ? stated.gender : gender_of(step.to)}
            : inverse(stated, gender_of(step.to));
    acc = compose_kinship(acc, hop);
    result.steps.push_back({std::move(step), hop, acc});
  }
  result.relation = acc;
  return result;
}

KinshipRelation infer_relation(const KnowledgeGraph& kg, std::string_view s, std::string_view o) {
  return explain_relation(kg, s, o).relation;
}

}  // namespace sgp
