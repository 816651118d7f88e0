#include <algorithm>
#include <regex>
#include <unordered_map>

#include "sgp/error.hpp"
#include "sgp/strategies.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

// Constraints resolved to object indexes.
struct Indexed {
  OrderConstraint::Kind kind;
  std::size_t a;
  std::size_t b;
  std::size_t index;
};

std::vector<Indexed> resolve(std::span<const std::string> objects, std::span<const OrderConstraint> constraints) {
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (!slot.emplace(text::entity_key(objects[i]), i).second) {
      throw Error(Errc::validation, "duplicate object: " + objects[i]);
    }
  }
  auto find = [&](const std::string& name) {
    auto it = slot.find(text::entity_key(name));
    if (it == slot.end()) throw Error(Errc::validation, "constraint names unknown object: " + name);
    return it->second;
  };

  std::vector<Indexed> out;
  for (const auto& c : constraints) {
    Indexed ic{c.kind, find(c.a), 0, c.index};
    if (c.kind == OrderConstraint::Kind::left_of || c.kind == OrderConstraint::Kind::right_of) {
      ic.b = find(c.b);
      if (ic.a == ic.b) throw Error(Errc::validation, "constraint relates an object to itself: " + to_text(c));
    }
    if (c.kind == OrderConstraint::Kind::at_position && c.index >= objects.size()) {
      throw Error(Errc::validation, "position out of range: " + to_text(c));
    }
    out.push_back(ic);
  }
  return out;
}

// Kahn's algorithm over the strict precedence edges.
bool has_precedence_cycle(std::size_t n, const std::vector<Indexed>& constraints) {
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& c : constraints) {
    if (c.kind == OrderConstraint::Kind::left_of) {
      succ[c.a].push_back(c.b);
      ++indegree[c.b];
    } else if (c.kind == OrderConstraint::Kind::right_of) {
      succ[c.b].push_back(c.a);
      ++indegree[c.a];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t at = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t next : succ[at]) {
      if (--indegree[next] == 0) ready.push_back(next);
    }
  }
  return seen != n;
}

// Checks the constraints decidable once `position[obj]` is known for the
// placed objects; unplaced objects have position n.
bool partial_ok(const std::vector<Indexed>& constraints, const std::vector<std::size_t>& position, std::size_t n) {
  for (const auto& c : constraints) {
    const std::size_t pa = position[c.a];
    switch (c.kind) {
      case OrderConstraint::Kind::leftmost:
        if (pa != n && pa != 0) return false;
        break;
      case OrderConstraint::Kind::rightmost:
        if (pa != n && pa != n - 1) return false;
        break;
      case OrderConstraint::Kind::at_position:
        if (pa != n && pa != c.index) return false;
        break;
      case OrderConstraint::Kind::left_of:
        // b placed before a (or a still unplaced) violates a < b.
        if (position[c.b] != n && (pa == n || pa > position[c.b])) return false;
        break;
      case OrderConstraint::Kind::right_of:
        if (pa != n && (position[c.b] == n || position[c.b] > pa)) return false;
        break;
    }
  }
  return true;
}

void search(const std::vector<Indexed>& constraints, std::span<const std::string> objects,
            std::vector<std::size_t>& position, std::vector<std::size_t>& order, std::size_t limit,
            std::vector<std::vector<std::string>>& out) {
  const std::size_t n = objects.size();
  if (out.size() >= limit) return;
  if (order.size() == n) {
    std::vector<std::string> names;
    for (std::size_t i : order) names.push_back(objects[i]);
    out.push_back(std::move(names));
    return;
  }
  for (std::size_t obj = 0; obj < n; ++obj) {
    if (position[obj] != n) continue;
    position[obj] = order.size();
    order.push_back(obj);
    if (partial_ok(constraints, position, n)) search(constraints, objects, position, order, limit, out);
    order.pop_back();
    position[obj] = n;
  }
}

}  // namespace

std::string to_text(const OrderConstraint& c) {
  switch (c.kind) {
    case OrderConstraint::Kind::left_of: return "left_of(" + c.a + ", " + c.b + ")";
    case OrderConstraint::Kind::right_of: return "right_of(" + c.a + ", " + c.b + ")";
    case OrderConstraint::Kind::leftmost: return "leftmost(" + c.a + ")";
    case OrderConstraint::Kind::rightmost: return "rightmost(" + c.a + ")";
    case OrderConstraint::Kind::at_position: return "at(" + c.a + ", " + std::to_string(c.index) + ")";
  }
  return {};
}

OrderConstraint parse_constraint(std::string_view line) {
  static const std::regex pattern(R"(^\s*([a-z_]+)\s*\(\s*([^,()]+?)\s*(?:,\s*([^,()]+?)\s*)?\)\s*$)",
                                  std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(line.begin(), line.end(), m, pattern)) {
    throw Error(Errc::validation, "not a constraint: " + std::string(line));
  }
  const std::string kind = text::to_lower(m[1].str());
  const std::string a = m[2].str();
  const bool binary = m[3].matched;
  const std::string b = binary ? m[3].str() : std::string();
  if (kind == "left_of" && binary) return OrderConstraint::left_of(a, b);
  if (kind == "right_of" && binary) return OrderConstraint::right_of(a, b);
  if (kind == "leftmost" && !binary) return OrderConstraint::leftmost(a);
  if (kind == "rightmost" && !binary) return OrderConstraint::rightmost(a);
  if (kind == "at" && binary) {
    std::size_t index = 0;
    try {
      std::size_t used = 0;
      index = std::stoul(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::exception&) {
      throw Error(Errc::validation, "position is not an integer: " + std::string(line));
    }
    return OrderConstraint::at(a, index);
  }
  throw Error(Errc::validation, "not a constraint: " + std::string(line));
}

SortProblem parse_sort_problem(std::string_view input) {
  SortProblem problem;
  bool have_objects = false;
  for (const auto& raw : text::split_lines(input)) {
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (text::starts_with_icase(line, "objects:")) {
      for (const auto& name : text::split(line.substr(8), ',')) {
        const std::string trimmed(text::trim(name));
        if (!trimmed.empty()) problem.objects.push_back(trimmed);
      }
      have_objects = true;
      continue;
    }
    problem.constraints.push_back(parse_constraint(line));
  }
  if (!have_objects) throw Error(Errc::validation, "sort problem has no 'objects:' line");
  return problem;
}

bool satisfies(std::span<const std::string> order, std::span<const OrderConstraint> constraints) {
  auto pos = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (text::entity_key(order[i]) == text::entity_key(name)) return i;
    }
    return std::nullopt;
  };
  for (const auto& c : constraints) {
    const auto pa = pos(c.a);
    if (!pa) return false;
    switch (c.kind) {
      case OrderConstraint::Kind::leftmost:
        if (*pa != 0) return false;
        break;
      case OrderConstraint::Kind::rightmost:
        if (*pa + 1 != order.size()) return false;
        break;
      case OrderConstraint::Kind::at_position:
        if (*pa != c.index) return false;
        break;
      case OrderConstraint::Kind::left_of:
      case OrderConstraint::Kind::right_of: {
        const auto pb = pos(c.b);
        if (!pb) return false;
        if (c.kind == OrderConstraint::Kind::left_of ? *pa >= *pb : *pa <= *pb) return false;
        break;
      }
    }
  }
  return true;
}

std::vector<std::vector<std::string>> enumerate_orders(std::span<const std::string> objects,
                                                       std::span<const OrderConstraint> constraints,
                                                       std::size_t limit) {
  const auto indexed = resolve(objects, constraints);
  std::vector<std::vector<std::string>> out;
  if (has_precedence_cycle(objects.size(), indexed)) return out;
  std::vector<std::size_t> position(objects.size(), objects.size());
  std::vector<std::size_t> order;
  search(indexed, objects, position, order, limit, out);
  return out;
}

std::vector<std::string> sort_order(std::span<const std::string> objects,
                                    std::span<const OrderConstraint> constraints) {
  const auto indexed = resolve(objects, constraints);
  if (has_precedence_cycle(objects.size(), indexed)) {
    throw Error(Errc::inconsistent, "ordering constraints form a cycle");
  }
  auto orders = enumerate_orders(objects, constraints);
  if (orders.empty()) throw Error(Errc::inconsistent, "no order satisfies every constraint");
  if (orders.size() > 1) {
    std::vector<std::string> candidates;
    for (const auto& o : orders) candidates.push_back(text::join(o, ", "));
    throw Error(Errc::underdetermined, std::to_string(orders.size()) + " orders satisfy the constraints",
                std::move(candidates));
  }
  return std::move(orders.front());
}

}  // namespace sgp
