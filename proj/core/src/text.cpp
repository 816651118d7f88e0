#include "sgp/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace sgp::text {

namespace {

bool is_space(char c) noexcept { return std::isspace(static_cast<unsigned char>(c)) != 0; }

char lower(char c) noexcept { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

}  // namespace

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines = split(s, '\n');
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  return lines;
}

std::string join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return lower(x) == lower(y); });
}

bool starts_with_icase(std::string_view s, std::string_view prefix) noexcept {
  return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  if (from.empty()) return s;
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string canonical_relation(std::string_view relation) {
  std::string spaced;
  spaced.reserve(relation.size() + 4);
  char prev = '\0';
  for (std::size_t i = 0; i < relation.size(); ++i) {
    char c = relation[i];
    if (c == '\\' && i + 1 < relation.size() && relation[i + 1] == '_') continue;
    if (c == '_') c = ' ';
    if (std::isupper(static_cast<unsigned char>(c)) && std::islower(static_cast<unsigned char>(prev))) {
      spaced.push_back(' ');
    }
    spaced.push_back(c);
    prev = c;
  }
  return to_lower(collapse_whitespace(spaced));
}

std::string entity_key(std::string_view entity) { return to_lower(collapse_whitespace(entity)); }

std::string normalize_answer(std::string_view s) {
  std::string cleaned = replace_all(std::string(s), "\\_", "_");
  std::replace(cleaned.begin(), cleaned.end(), '_', ' ');
  std::string_view view = trim(cleaned);
  constexpr std::string_view ascii = "\"'`.,;:!?()[]{}*";
  constexpr std::string_view curly[] = {"‘", "’", "“", "”"};
  bool changed = true;
  while (changed && !view.empty()) {
    changed = false;
    if (ascii.find(view.front()) != std::string_view::npos || is_space(view.front())) {
      view.remove_prefix(1);
      changed = true;
    } else if (ascii.find(view.back()) != std::string_view::npos || is_space(view.back())) {
      view.remove_suffix(1);
      changed = true;
    } else {
      for (std::string_view q : curly) {
        if (view.starts_with(q)) {
          view.remove_prefix(q.size());
          changed = true;
        } else if (view.ends_with(q)) {
          view.remove_suffix(q.size());
          changed = true;
        }
      }
    }
  }
  return to_lower(collapse_whitespace(view));
}

std::string normalize_entity(std::string_view s) {
  std::string out = normalize_answer(s);
  for (std::string_view article : {"the ", "a ", "an "}) {
    if (out.starts_with(article)) {
      out.erase(0, article.size());
      break;
    }
  }
  return out;
}

std::optional<double> parse_numeric_literal(std::string_view s) {
  s = trim(s);
  for (std::string_view unit : kNumericUnits) {
    if (s.size() > unit.size() && iequals(s.substr(s.size() - unit.size()), unit)) {
      s = trim(s.substr(0, s.size() - unit.size()));
      break;
    }
  }
  if (s.empty()) return std::nullopt;
  for (std::size_t i = 0; i < std::size(kNumberWords); ++i) {
    if (iequals(s, kNumberWords[i])) return static_cast<double>(i);
  }
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

}  // namespace sgp::text
