#include <algorithm>
#include <regex>

#include "sgp/csv.hpp"
#include "sgp/error.hpp"
#include "sgp/strategies.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

constexpr std::string_view kIsA = "is a";
constexpr std::string_view kNameAttribute = "name";

std::string attribute_value(const KnowledgeGraph& kg, const std::string& subject, const std::string& attribute) {
  if (text::canonical_relation(attribute) == kNameAttribute) {
    auto stated = kg.objects(subject, attribute);
    return stated.empty() ? kg.display_name(subject) : stated.front();
  }
  auto values = kg.objects(subject, attribute);
  if (values.empty()) {
    throw Error(Errc::missing_attribute, subject + " has no '" + attribute + "'", {subject, attribute});
  }
  return values.front();
}

// Negative, zero or positive like strcmp. Numeric when both sides are.
int compare_literals(std::string_view lhs, std::string_view rhs) {
  const auto ln = text::parse_numeric_literal(lhs);
  const auto rn = text::parse_numeric_literal(rhs);
  if (ln && rn) return *ln < *rn ? -1 : (*ln > *rn ? 1 : 0);
  const std::string a = text::to_lower(text::trim(lhs));
  const std::string b = text::to_lower(text::trim(rhs));
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

bool holds(int cmp, Comparator op) {
  switch (op) {
    case Comparator::lt: return cmp < 0;
    case Comparator::gt: return cmp > 0;
    case Comparator::eq: return cmp == 0;
    case Comparator::ne: return cmp != 0;
    case Comparator::le: return cmp <= 0;
    case Comparator::ge: return cmp >= 0;
  }
  return false;
}

std::string header_name(std::string_view raw) {
  std::string name(text::trim(raw));
  if (auto open = name.find('('); open != std::string::npos) name.erase(open);
  return text::canonical_relation(name);
}

}  // namespace

std::string_view to_string(Comparator cmp) noexcept {
  switch (cmp) {
    case Comparator::lt: return "<";
    case Comparator::gt: return ">";
    case Comparator::eq: return "=";
    case Comparator::ne: return "!=";
    case Comparator::le: return "<=";
    case Comparator::ge: return ">=";
  }
  return "?";
}

std::string QueryResult::text() const {
  if (kind == Projection::Kind::count) return std::to_string(count);
  return text::join(entities, ", ");
}

Conjunct parse_conjunct(std::string_view input) {
  static const std::regex pattern(R"(^\s*([^<>=!≠≤≥]+?)\s*(<=|>=|!=|==|<|>|=|≠|≤|≥)\s*(.+?)\s*$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(input.begin(), input.end(), m, pattern)) {
    throw Error(Errc::validation, "not a condition: " + std::string(input));
  }
  const std::string op = m[2].str();
  Comparator cmp = Comparator::eq;
  if (op == "<") cmp = Comparator::lt;
  else if (op == ">") cmp = Comparator::gt;
  else if (op == "<=" || op == "≤") cmp = Comparator::le;
  else if (op == ">=" || op == "≥") cmp = Comparator::ge;
  else if (op == "!=" || op == "≠") cmp = Comparator::ne;
  return Conjunct{text::canonical_relation(m[1].str()), cmp, m[3].str()};
}

Projection parse_projection(std::string_view input) {
  const std::string p = text::to_lower(text::trim(input));
  if (p == "count") return {Projection::Kind::count, {}};
  if (p == "set") return {Projection::Kind::set, {}};
  for (auto [prefix, kind] : {std::pair{std::string_view("last:"), Projection::Kind::arg_sort_last},
                              std::pair{std::string_view("first:"), Projection::Kind::arg_sort_first}}) {
    if (p.starts_with(prefix) && p.size() > prefix.size()) {
      return {kind, text::canonical_relation(p.substr(prefix.size()))};
    }
  }
  throw Error(Errc::validation, "not a projection: " + std::string(input));
}

QueryResult run_graph_query(const KnowledgeGraph& kg, const FilterPredicate& predicate) {
  std::vector<std::string> candidates =
      predicate.of_class ? kg.subjects(kIsA, *predicate.of_class) : kg.subject_entities();

  std::vector<std::string> matches;
  for (const auto& subject : candidates) {
    bool ok = true;
    for (const auto& c : predicate.conjuncts) {
      if (!holds(compare_literals(attribute_value(kg, subject, c.attribute), c.value), c.cmp)) {
        ok = false;
        break;
      }
    }
    if (ok) matches.push_back(subject);
  }

  QueryResult result;
  result.kind = predicate.projection.kind;
  result.count = matches.size();
  switch (predicate.projection.kind) {
    case Projection::Kind::count:
    case Projection::Kind::set:
      result.entities = std::move(matches);
      break;
    case Projection::Kind::arg_sort_last:
    case Projection::Kind::arg_sort_first: {
      if (matches.empty()) break;
      std::vector<std::pair<std::string, std::string>> keyed;
      for (auto& m : matches) keyed.emplace_back(attribute_value(kg, m, predicate.projection.attribute), m);
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& x, const auto& y) { return compare_literals(x.first, y.first) < 0; });
      const bool last = predicate.projection.kind == Projection::Kind::arg_sort_last;
      result.entities = {last ? keyed.back().second : keyed.front().second};
      break;
    }
  }
  return result;
}

KnowledgeGraph graph_from_table(std::string_view csv_text, std::string_view row_class, std::string_view key_column) {
  const auto rows = csv::parse(csv_text);
  KnowledgeGraph kg;
  if (rows.empty()) return kg;
  std::vector<std::string> header;
  for (const auto& h : rows.front()) header.push_back(header_name(h));
  const std::string key = text::canonical_relation(key_column);
  auto key_it = std::find(header.begin(), header.end(), key);
  if (key_it == header.end()) throw Error(Errc::missing_column, "table has no '" + key + "' column");
  const auto key_index = static_cast<std::size_t>(key_it - header.begin());

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw Error(Errc::unparseable_row, "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                             " cells, header has " + std::to_string(header.size()),
                  {std::to_string(r)});
    }
    const std::string subject(text::trim(row[key_index]));
    if (!row_class.empty()) kg.add(make_triple(subject, kIsA, row_class));
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == key_index || text::trim(row[c]).empty()) continue;
      kg.add(make_triple(subject, header[c], row[c]));
    }
  }
  return kg;
}

}  // namespace sgp
