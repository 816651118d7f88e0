#include "sgp/textgraph.hpp"

#include <regex>

#include "sgp/error.hpp"
#include "sgp/kinship.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

using svmatch = std::match_results<std::string_view::const_iterator>;

bool regex_full(std::string_view s, svmatch& m, const std::regex& re) {
  return std::regex_match(s.begin(), s.end(), m, re);
}

std::string_view strip_bullet(std::string_view s) {
  for (std::string_view bullet : {"- ", "* ", "• ", "•"}) {
    if (s.starts_with(bullet)) return text::trim(s.substr(bullet.size()));
  }
  if (s.size() > 1 && (s.front() == '-' || s.front() == '*') && s[1] == '(') return s.substr(1);
  return s;
}

// Splits "(a, r, b) -> (c, r, d)" into the parenthesised group bodies.
// Returns false when the line is not a sequence of groups.
bool split_groups(std::string_view s, std::vector<std::string_view>& groups) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos >= s.size()) break;
    if (s[pos] != '(') return !groups.empty();  // trailing prose after a triple is tolerated
    int depth = 0;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = pos; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string_view::npos) return false;
    groups.push_back(s.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    while (pos < s.size() && s[pos] == ' ') ++pos;
    for (std::string_view joiner : {"->", "→", "&", ","}) {
      if (s.substr(pos).starts_with(joiner)) {
        pos += joiner.size();
        break;
      }
    }
  }
  return !groups.empty();
}

std::optional<Triple> triple_from_group(std::string_view body, std::optional<std::size_t> timestep) {
  const auto first = body.find(',');
  if (first == std::string_view::npos) return std::nullopt;
  const auto second = body.find(',', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  const auto subject = text::trim(body.substr(0, first));
  const auto relation = text::trim(body.substr(first + 1, second - first - 1));
  const auto object = text::trim(body.substr(second + 1));
  if (subject == "?" || object == "?" || relation == "?") return std::nullopt;
  try {
    return make_triple(subject, relation, object, timestep);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool is_option_marker(std::string_view group) {
  const auto g = text::trim(group);
  return g.size() == 1 && std::isalpha(static_cast<unsigned char>(g.front()));
}

std::string upper_letter(const std::string& s) { return std::string(1, static_cast<char>(std::toupper(s.at(0)))); }

struct Candidate {
  std::size_t position;
  std::size_t priority;
  ParsedAnswer answer;
};

ParsedAnswer classify(std::string value, std::string raw, AnswerKind hint) {
  static const std::regex option_inside(R"(\(([A-Za-z])\))");
  std::smatch m;
  if (std::regex_search(value, m, option_inside)) {
    return {AnswerKind::option, upper_letter(m[1].str()), std::move(raw)};
  }
  const std::string trimmed(text::trim(value));
  if (hint == AnswerKind::option && trimmed.size() == 1 && std::isalpha(static_cast<unsigned char>(trimmed[0]))) {
    return {AnswerKind::option, upper_letter(trimmed), std::move(raw)};
  }
  const std::string normalized = text::normalize_answer(value);
  if (auto number = text::parse_numeric_literal(normalized)) {
    return {AnswerKind::number, text::format_number(*number), std::move(raw)};
  }
  if (hint == AnswerKind::relation) return {AnswerKind::relation, normalized, std::move(raw)};
  return {AnswerKind::entity, normalized, std::move(raw)};
}

}  // namespace

std::vector<Triple> TripleExtraction::all() const {
  std::vector<Triple> out;
  for (const auto& b : blocks) out.insert(out.end(), b.triples.begin(), b.triples.end());
  return out;
}

TripleExtraction extract_triples(std::string_view input) {
  static const std::regex header(R"(^(\d+)[.)]\s*(.*)$)");
  static const std::regex stamp(R"(^t\s*=\s*(\d+)\s*:\s*(.*)$)", std::regex::icase);
  static const std::regex dashed(R"(^(.+?)\s+-\s+(.+?)\s+-\s+(.+)$)");
  static const std::regex attribute(R"(^([^:]+?)\s+-\s+([^:]+?):\s*(.+)$)");

  TripleExtraction out;
  std::size_t block = 0;
  for (const auto& raw : text::split_lines(input)) {
    std::string_view s = text::trim(raw);
    if (s.empty()) continue;
    svmatch m;
    s = strip_bullet(s);
    if (regex_full(s, m, header)) {
      ++block;
      ++out.diagnostics.blocks_found;
      s = text::trim(std::string_view(m[2].first, static_cast<std::size_t>(m[2].length())));
      s = strip_bullet(s);
    }
    std::optional<std::size_t> timestep;
    if (regex_full(s, m, stamp)) {
      timestep = std::stoul(m[1].str());
      s = text::trim(std::string_view(m[2].first, static_cast<std::size_t>(m[2].length())));
    }
    if (s.empty()) continue;

    std::vector<Triple> found;
    bool triple_shaped = false;
    if (s.front() == '(') {
      std::vector<std::string_view> groups;
      const bool grouped = split_groups(s, groups);
      if (grouped && is_option_marker(groups.front())) continue;
      triple_shaped = true;
      if (grouped) {
        for (auto g : groups) {
          if (auto t = triple_from_group(g, timestep)) found.push_back(std::move(*t));
        }
      }
    } else if (regex_full(s, m, dashed) || regex_full(s, m, attribute)) {
      triple_shaped = true;
      try {
        found.push_back(make_triple(m[1].str(), m[2].str(), m[3].str(), timestep));
      } catch (const Error&) {
      }
    }

    if (found.empty()) {
      if (triple_shaped) ++out.diagnostics.skipped_lines;
      continue;
    }
    if (out.blocks.empty() || out.blocks.back().index != block) out.blocks.push_back({block, {}});
    auto& target = out.blocks.back().triples;
    target.insert(target.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  return out;
}

std::optional<ParsedAnswer> try_extract_final_answer(std::string_view input, AnswerKind hint) {
  const std::string body(input);
  constexpr auto icase = std::regex::ECMAScript | std::regex::icase;
  // Sentence tail: lazily up to ". ", a newline or the end.
  const std::string tail = R"(([^\n]+?)\s*(?=\.(?:\s|$)|\n|$))";
  static const std::regex option_marker(R"(\boption\s*\(([a-z])\))", icase);
  static const std::regex correct_marker(R"(\bcorrect (?:statement|answer|option|choice) is:?\s*\(([a-z])\))", icase);
  static const std::regex answer_is(R"(\banswer is:?\s*)" + tail, icase);
  static const std::regex missing_relation(R"(\bmissing relation is:?\s*['"‘’“”]?([a-z][a-z\- ]*[a-z]))", icase);
  static const std::regex possessive(
      R"(\[?\b([A-Z][\w\-]*)\]?\s+is\s+(?:the\s+)?\[?([A-Z][\w\-]*)\]?'s\s+([a-z]+(?:[\- ]in[\- ]law)?))");
  static const std::regex conclude(R"(\b(?:conclude|infer|deduce)\s+that\s+[^.\n]*\s(?:is|was)\s+)" + tail, icase);
  static const std::regex in_conclusion(R"(\bin conclusion,?\s+[^.\n]*\s(?:is|was)\s+)" + tail, icase);
  static const std::regex therefore(R"(\btherefore,?\s+the\s+(?!correct\b|answer\b)[^.\n]*\s(?:is|was)\s+)" + tail,
                                    icase);
  static const std::regex leading_option(R"(^\s*\(([A-Z])\)\s+\S)");

  std::vector<Candidate> found;
  auto scan = [&](const std::regex& re, std::size_t priority, auto&& make) {
    for (auto it = std::sregex_iterator(body.begin(), body.end(), re); it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      if (auto answer = make(m)) {
        found.push_back({static_cast<std::size_t>(m.position(0)), priority, std::move(*answer)});
      }
    }
  };
  auto letter = [](const std::smatch& m) -> std::optional<ParsedAnswer> {
    return ParsedAnswer{AnswerKind::option, upper_letter(m[1].str()), m[0].str()};
  };
  auto free_text = [&](const std::smatch& m) -> std::optional<ParsedAnswer> {
    return classify(m[1].str(), m[0].str(), hint);
  };

  scan(option_marker, 0, letter);
  scan(correct_marker, 1, letter);
  scan(answer_is, 2, free_text);
  scan(missing_relation, 3, [](const std::smatch& m) -> std::optional<ParsedAnswer> {
    return ParsedAnswer{AnswerKind::relation, text::normalize_answer(m[1].str()), m[0].str()};
  });
  scan(possessive, 4, [](const std::smatch& m) -> std::optional<ParsedAnswer> {
    if (!parse_kinship(m[3].str())) return std::nullopt;
    return ParsedAnswer{AnswerKind::relation, text::normalize_answer(m[3].str()), m[0].str()};
  });
  scan(conclude, 5, free_text);
  scan(in_conclusion, 6, free_text);
  scan(therefore, 7, free_text);

  // The answer-first layout: "(C) The Odyssey" as the first non-empty line.
  for (const auto& line : text::split_lines(body)) {
    if (text::trim(line).empty()) continue;
    std::smatch m;
    if (std::regex_search(line, m, leading_option)) {
      found.push_back({0, 8, ParsedAnswer{AnswerKind::option, m[1].str(), std::string(text::trim(line))}});
    }
    break;
  }

  if (found.empty()) return std::nullopt;
  const auto best = std::max_element(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.priority > b.priority;
  });
  return best->answer;
}

ParsedAnswer extract_final_answer(std::string_view text, AnswerKind kind_hint) {
  if (auto answer = try_extract_final_answer(text, kind_hint)) return *answer;
  throw Error(Errc::no_answer_found, "no conclusion marker in response");
}

std::string_view to_string(ConsistencyStatus status) noexcept {
  switch (status) {
    case ConsistencyStatus::consistent: return "consistent";
    case ConsistencyStatus::inconsistent: return "inconsistent";
    case ConsistencyStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

bool answers_equivalent(std::string_view a, std::string_view b, AnswerKind kind) {
  if (kind == AnswerKind::relation) {
    const auto ra = parse_kinship(a);
    const auto rb = parse_kinship(b);
    if (ra && rb) {
      return ra->kind == rb->kind &&
             (ra->gender == rb->gender || ra->gender == Gender::unknown || rb->gender == Gender::unknown);
    }
  }
  const auto na = text::parse_numeric_literal(text::normalize_answer(a));
  const auto nb = text::parse_numeric_literal(text::normalize_answer(b));
  if (na && nb) return *na == *nb;
  return text::normalize_entity(a) == text::normalize_entity(b);
}

std::optional<std::string> resolve_option(std::span<const OptionChoice> options, std::string_view value,
                                          AnswerKind value_kind) {
  for (const auto& o : options) {
    if (answers_equivalent(o.text, value, value_kind)) return o.letter;
  }
  const std::string needle = " " + text::normalize_entity(value) + " ";
  if (needle.size() <= 2) return std::nullopt;
  std::optional<std::string> hit;
  for (const auto& o : options) {
    const std::string hay = " " + text::normalize_answer(o.text) + " ";
    if (hay.find(needle) == std::string::npos) continue;
    if (hit) return std::nullopt;
    hit = o.letter;
  }
  return hit;
}

ConsistencyReport audit_consistency(std::string_view input, const AuditQuery& query, AnswerKind kind_hint,
                                    std::span<const OptionChoice> options) {
  const int gaps = !query.subject + !query.relation + !query.object;
  if (gaps != 1) throw Error(Errc::validation, "audit query needs exactly one open slot");

  ConsistencyReport report;
  const auto triples = extract_triples(input).all();
  const std::string relation = query.relation ? text::canonical_relation(*query.relation) : std::string();
  for (auto it = triples.rbegin(); it != triples.rend(); ++it) {
    if (query.subject && text::entity_key(it->subject) != text::entity_key(*query.subject)) continue;
    if (query.relation && it->relation != relation) continue;
    if (query.object && text::entity_key(it->object) != text::entity_key(*query.object)) continue;
    const std::string& value = !query.subject ? it->subject : (!query.relation ? it->relation : it->object);
    AnswerKind kind = !query.relation || kind_hint == AnswerKind::relation ? AnswerKind::relation
                      : text::parse_numeric_literal(value)                 ? AnswerKind::number
                                                                           : AnswerKind::entity;
    report.derived = ParsedAnswer{kind, text::normalize_answer(value), to_text(*it)};
    report.evidence.push_back("derived: " + to_text(*it));
    break;
  }
  report.stated = try_extract_final_answer(input, kind_hint);
  if (report.stated) report.evidence.push_back("stated: " + report.stated->raw_span);
  if (!report.derived || !report.stated) return report;

  const auto& derived = *report.derived;
  const auto& stated = *report.stated;
  bool same = false;
  if (stated.kind == AnswerKind::option) {
    std::optional<std::string> stated_text;
    for (const auto& o : options) {
      if (text::iequals(o.letter, stated.value)) stated_text = o.text;
    }
    if (!stated_text) {
      report.evidence.push_back("option " + stated.value + " has no text");
      return report;
    }
    const auto derived_letter = resolve_option(options, derived.value, derived.kind);
    same = answers_equivalent(derived.value, *stated_text, derived.kind) ||
           (derived_letter && *derived_letter == stated.value);
  } else {
    same = answers_equivalent(derived.value, stated.value, derived.kind);
  }
  report.status = same ? ConsistencyStatus::consistent : ConsistencyStatus::inconsistent;
  return report;
}

ParsedResponse parse_response(std::string_view input, AnswerKind kind_hint) {
  ParsedResponse out;
  out.graph = extract_triples(input);
  out.final_answer = try_extract_final_answer(input, kind_hint);
  for (const auto& line : text::split_lines(input)) {
    const auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    if (extract_triples(trimmed).blocks.empty()) out.derivation_lines.emplace_back(trimmed);
  }
  return out;
}

}  // namespace sgp
