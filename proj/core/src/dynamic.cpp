#include <regex>

#include "sgp/error.hpp"
#include "sgp/kg.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string single_value(const KnowledgeGraph& kg, const std::string& entity, const std::string& relation) {
  const auto values = kg.objects(entity, relation);
  if (values.size() != 1) {
    throw Error(Errc::invalid_event, entity + " holds " + std::to_string(values.size()) + " values under '" +
                                         relation + "', swap needs exactly one");
  }
  return values.front();
}

}  // namespace

std::string to_text(const Event& event) {
  return std::visit(overloaded{
                        [](const Assign& a) { return "assign(" + a.entity + ", " + a.relation + ", " + a.value + ")"; },
                        [](const Swap& s) { return "swap(" + s.first + ", " + s.second + ", " + s.relation + ")"; },
                    },
                    event);
}

Event parse_event(std::string_view line) {
  static const std::regex pattern(R"(^\s*(assign|swap)\s*\(\s*([^,]+?)\s*,\s*([^,]+?)\s*,\s*(.+?)\s*\)\s*$)",
                                  std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(line.begin(), line.end(), m, pattern)) {
    throw Error(Errc::validation, "not an event: " + std::string(line));
  }
  if (text::iequals(m[1].str(), "assign")) {
    return Assign{m[2].str(), text::canonical_relation(m[3].str()), m[4].str()};
  }
  return Swap{m[2].str(), m[3].str(), text::canonical_relation(m[4].str())};
}

KnowledgeGraph apply_event(const KnowledgeGraph& snapshot, const Event& event, std::optional<std::size_t> timestep) {
  KnowledgeGraph next = snapshot;
  std::visit(overloaded{
                 [&](const Assign& a) { next.reassign(a.entity, a.relation, a.value, timestep); },
                 [&](const Swap& s) {
                   const std::string relation = text::canonical_relation(s.relation);
                   const std::string first_value = single_value(snapshot, s.first, relation);
                   const std::string second_value = single_value(snapshot, s.second, relation);
                   if (text::entity_key(s.first) == text::entity_key(s.second)) return;
                   next.reassign(s.first, relation, second_value, timestep);
                   next.reassign(s.second, relation, first_value, timestep);
                 },
             },
             event);
  return next;
}

DynamicSeries::DynamicSeries(KnowledgeGraph initial) { snapshots_.push_back(std::move(initial)); }

void DynamicSeries::apply(const Event& event) {
  snapshots_.push_back(apply_event(snapshots_.back(), event, events_.size() + 1));
  events_.push_back(event);
}

DynamicSeries apply_event(DynamicSeries series, const Event& event) {
  series.apply(event);
  return series;
}

}  // namespace sgp
