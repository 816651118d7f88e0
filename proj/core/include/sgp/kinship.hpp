#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sgp/kg.hpp"

namespace sgp {

/// Gender-free kinship kinds. A kind plus a gender yields one surface label
/// ("pibling" + female = "aunt").
enum class KinKind {
  self,
  parent,
  child,
  sibling,
  spouse,
  grandparent,
  grandchild,
  pibling,
  nibling,
  cousin,
  parent_in_law,
  child_in_law,
  sibling_in_law,
};

enum class Gender { male, female, unknown };

/// generation: ancestors positive. collateral: 0 lineal, 1 sibling line,
/// 2 cousin line. in_law: reached through a marriage.
struct KinSignature {
  int generation = 0;
  int collateral = 0;
  bool in_law = false;
  Gender gender = Gender::unknown;

  friend bool operator==(const KinSignature&, const KinSignature&) = default;
};

/// "Y is X's <relation>". Values are always canonical (kind + gender).
struct KinshipRelation {
  KinKind kind = KinKind::self;
  Gender gender = Gender::unknown;

  [[nodiscard]] std::string label() const;
  [[nodiscard]] KinSignature signature() const;

  friend bool operator==(const KinshipRelation&, const KinshipRelation&) = default;
};

/// The 23 gendered labels (plus "cousin") used by the benchmark.
const std::vector<std::string>& kinship_labels();

/// Gender-neutral label of every non-self kind.
const std::vector<std::string>& neutral_kinship_labels();

/// Accepts gendered and neutral labels in any relation spelling:
/// "hasSon", "has_son", "son of", "father in law", "Father-In-Law".
std::optional<KinshipRelation> parse_kinship(std::string_view label);

/// parse_kinship or Error(validation).
KinshipRelation kinship(std::string_view label);

/// A relative to C, given B is A's r_ab and C is B's r_bc. The result takes
/// r_bc's gender. Throws Error(undefined_composition) outside the table.
KinshipRelation compose_kinship(const KinshipRelation& r_ab, const KinshipRelation& r_bc);

/// Whether compose_kinship is defined for the kind pair.
bool composable(KinKind first, KinKind second) noexcept;

/// If Y is X's r, X is Y's inverse(r). `gender` is X's gender.
KinshipRelation inverse(const KinshipRelation& r, Gender gender);

/// Gender of each entity implied by gendered labels: (X, L, Y) with L
/// gendered fixes Y's gender. Keys are entity keys.
std::unordered_map<std::string, Gender> infer_genders(const KnowledgeGraph& kg);

struct KinshipStep {
  PathStep step;
  KinshipRelation hop;          // relation of step.to relative to step.from
  KinshipRelation accumulated;  // relation of step.to relative to the origin
};

struct KinshipInference {
  KinshipRelation relation;  // s is o's relation
  std::vector<KinshipStep> steps;
};

/// Label L such that "s is o's L", folding compose_kinship along the path
/// from o to s. Throws NoPath / EntityNotFound / Undefined, and
/// Error(validation) if a path edge carries a non-kinship relation.
KinshipInference explain_relation(const KnowledgeGraph& kg, std::string_view s, std::string_view o);
KinshipRelation infer_relation(const KnowledgeGraph& kg, std::string_view s, std::string_view o);

}  // namespace sgp
