#include "sgp/datasets.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "sgp/csv.hpp"
#include "sgp/error.hpp"
#include "sgp/kinship.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// JSON built in code stores 5 as a signed integer; parsed text stores it as
// unsigned. Both are counts when non-negative.
bool is_count(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

std::vector<std::string> numbered(int lo, int hi) {
  std::vector<std::string> v;
  for (int i = lo; i <= hi; ++i) v.push_back(std::to_string(i));
  return v;
}

bool in_scheme(TaskKind task, std::string_view bucket) {
  const auto& scheme = bucket_scheme(task);
  return std::find(scheme.begin(), scheme.end(), bucket) != scheme.end();
}

json parse_json_file(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::schema_mismatch, path.string() + ": " + e.what());
  }
}

std::string strip_entity_markers(std::string_view story) {
  std::string out;
  for (char c : story) {
    if (c != '[' && c != ']') out += c;
  }
  return std::string(text::trim(out));
}

// "('Seth', 'Jeremy')" -> {"Seth", "Jeremy"}
std::optional<std::pair<std::string, std::string>> parse_query_pair(std::string_view raw) {
  static const std::regex quoted(R"(['"]([^'"]+)['"])");
  std::vector<std::string> names;
  const std::string s(raw);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), quoted); it != std::sregex_iterator(); ++it) {
    names.push_back((*it)[1].str());
  }
  if (names.size() != 2) return std::nullopt;
  return std::pair{names[0], names[1]};
}

std::optional<std::size_t> hop_count(const csv::Row& row, std::optional<std::size_t> task_name,
                                     std::optional<std::size_t> f_comb) {
  static const std::regex task_pattern(R"(^task_\d+\.(\d+)$)");
  if (task_name && *task_name < row.size()) {
    std::smatch m;
    const std::string value(text::trim(row[*task_name]));
    if (std::regex_match(value, m, task_pattern)) return std::stoul(m[1].str());
  }
  if (f_comb && *f_comb < row.size()) {
    const std::string_view value = text::trim(row[*f_comb]);
    if (!value.empty()) return static_cast<std::size_t>(std::count(value.begin(), value.end(), '-')) + 1;
  }
  return std::nullopt;
}

// Splits a BBH input into story, question and options.
struct BbhParts {
  std::string story;
  std::string question;
  std::vector<OptionChoice> options;
};

BbhParts split_bbh_input(const std::string& input) {
  static const std::regex option_line(R"(^\s*\(([A-Z])\)\s*(.*?)\s*$)");
  BbhParts parts;
  std::string body = input;
  if (auto at = input.rfind("Options:"); at != std::string::npos) {
    body = input.substr(0, at);
    for (const auto& line : text::split_lines(input.substr(at + 8))) {
      std::smatch m;
      if (std::regex_match(line, m, option_line)) parts.options.push_back({m[1].str(), m[2].str()});
    }
  }
  const std::string trimmed(text::trim(body));
  // The question is the final sentence of the final line.
  std::size_t cut = trimmed.rfind('\n');
  cut = cut == std::string::npos ? 0 : cut + 1;
  const std::size_t last_line = cut;
  for (std::size_t i = trimmed.size(); i-- > last_line + 1;) {
    if ((trimmed[i - 1] == '.' || trimmed[i - 1] == '?' || trimmed[i - 1] == '!') && trimmed[i] == ' ' &&
        i + 1 < trimmed.size()) {
      cut = i + 1;
      break;
    }
  }
  parts.story = std::string(text::trim(trimmed.substr(0, cut)));
  parts.question = std::string(text::trim(trimmed.substr(cut)));
  return parts;
}

std::string target_letter(const std::string& target) {
  static const std::regex letter(R"(^\s*\(?([A-Za-z])\)?\s*$)");
  std::smatch m;
  if (!std::regex_match(target, m, letter)) return {};
  return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(m[1].str()[0]))));
}

std::vector<std::string> sentences_of(const json& row) {
  std::vector<std::pair<std::size_t, std::string>> numbered_sentences;
  if (row.contains("meta") && row["meta"].is_object() && row["meta"].contains("triples") &&
      row["meta"]["triples"].is_object()) {
    for (const auto& [key, value] : row["meta"]["triples"].items()) {
      if (key.rfind("sent", 0) != 0 || !value.is_string()) continue;
      numbered_sentences.emplace_back(std::stoul(key.substr(4)), value.get<std::string>());
    }
  } else if (row.contains("context") && row["context"].is_string()) {
    static const std::regex sent(R"(sent(\d+):\s*(.*?)\s*(?=sent\d+:|$))");
    const std::string context = row["context"].get<std::string>();
    for (auto it = std::sregex_iterator(context.begin(), context.end(), sent); it != std::sregex_iterator(); ++it) {
      numbered_sentences.emplace_back(std::stoul((*it)[1].str()), (*it)[2].str());
    }
  } else {
    throw Error(Errc::schema_mismatch, "entailment row needs meta.triples or context");
  }
  std::sort(numbered_sentences.begin(), numbered_sentences.end());
  std::vector<std::string> lines;
  for (const auto& [n, s] : numbered_sentences) lines.push_back("sent" + std::to_string(n) + ": " + s);
  return lines;
}

std::string require_string(const json& row, const char* key, const std::string& where) {
  if (!row.is_object() || !row.contains(key) || !row[key].is_string()) {
    throw Error(Errc::schema_mismatch, where + ": missing string field '" + key + "'", {where});
  }
  return row[key].get<std::string>();
}

}  // namespace

void AliasTable::add(std::string_view alias, std::string_view canonical) {
  map_.insert_or_assign(text::canonical_relation(alias), text::canonical_relation(canonical));
}

std::string AliasTable::canonical(std::string_view label) const {
  const std::string key = text::canonical_relation(label);
  auto it = map_.find(key);
  return it == map_.end() ? key : it->second;
}

bool AliasTable::contains(std::string_view alias) const { return map_.contains(text::canonical_relation(alias)); }

AliasTable parse_aliases(const json& j) {
  if (!j.is_object()) throw Error(Errc::schema_mismatch, "alias file must be an object of label -> [aliases]");
  AliasTable table;
  for (const auto& [canonical, aliases] : j.items()) {
    if (!aliases.is_array()) throw Error(Errc::schema_mismatch, "aliases of '" + canonical + "' must be an array");
    for (const auto& a : aliases) {
      if (!a.is_string()) throw Error(Errc::schema_mismatch, "alias of '" + canonical + "' must be a string");
      table.add(a.get<std::string>(), canonical);
    }
  }
  return table;
}

AliasTable load_aliases(const fs::path& path) { return parse_aliases(parse_json_file(path)); }

const std::vector<std::string>& bucket_scheme(TaskKind task) {
  static const std::vector<std::string> odd{"3", "5", "7"};
  static const std::vector<std::string> bridge{std::string(kHotpotBucket)};
  static const std::vector<std::string> query{"penguins_in_a_table", "reasoning_about_colored_objects"};
  static const std::vector<std::string> hops = numbered(3, 10);
  static const std::vector<std::string> steps = numbered(1, 6);
  switch (task) {
    case TaskKind::relation_prediction: return hops;
    case TaskKind::dynamic_entity_prediction:
    case TaskKind::graph_sorting: return odd;
    case TaskKind::complex_entity_prediction: return bridge;
    case TaskKind::graph_query: return query;
    case TaskKind::logical_inference: return steps;
  }
  return bridge;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void validate_instance(const TaskInstance& instance, const AliasTable& aliases) {
  validate_gold(instance);
  if (instance.gold.kind == AnswerKind::relation) {
    const std::string label = aliases.canonical(instance.gold.value);
    if (!parse_kinship(label)) {
      throw Error(Errc::validation, "instance " + instance.id + ": gold '" + instance.gold.value +
                                        "' is neither a kinship label nor an alias");
    }
  }
  if (!in_scheme(instance.task, instance.bucket)) {
    throw Error(Errc::validation, "instance " + instance.id + ": bucket '" + instance.bucket + "' is off-scheme");
  }
}

std::vector<TaskInstance> parse_clutrr(std::string_view csv_text, const AliasTable& aliases) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty()) return {};
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows.front().size(); ++i) column.emplace(text::to_lower(text::trim(rows.front()[i])), i);
  auto optional_column = [&](const char* name) -> std::optional<std::size_t> {
    auto it = column.find(name);
    return it == column.end() ? std::nullopt : std::optional(it->second);
  };
  for (const char* required : {"story", "query", "target"}) {
    if (!column.contains(required)) throw Error(Errc::missing_column, std::string("missing column '") + required + "'");
  }
  const auto task_name = optional_column("task_name");
  const auto f_comb = optional_column("f_comb");
  if (!task_name && !f_comb) throw Error(Errc::missing_column, "missing hop column: need 'task_name' or 'f_comb'");
  const auto id_column = optional_column("id");
  const auto facts_column = optional_column("facts");

  std::vector<TaskInstance> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = std::to_string(r);
    auto fail = [&](const std::string& why) -> void {
      throw Error(Errc::unparseable_row, "row " + where + ": " + why, {where});
    };
    if (row.size() != rows.front().size()) fail("expected " + std::to_string(rows.front().size()) + " cells");
    const auto pair = parse_query_pair(row[column.at("query")]);
    if (!pair) fail("query is not a ('A', 'B') pair");
    const auto hops = hop_count(row, task_name, f_comb);
    if (!hops) fail("no hop count");
    if (*hops < 3 || *hops > 10) continue;

    TaskInstance instance;
    instance.id = id_column && !text::trim(row[*id_column]).empty() ? std::string(text::trim(row[*id_column]))
                                                                     : "clutrr-" + where;
    instance.task = TaskKind::relation_prediction;
    instance.story = strip_entity_markers(row[column.at("story")]);
    instance.question = "How is " + pair->second + " related to " + pair->first + "?";
    instance.gold = {AnswerKind::relation, aliases.canonical(row[column.at("target")])};
    instance.bucket = std::to_string(*hops);
    if (facts_column && !text::trim(row[*facts_column]).empty()) {
      try {
        instance.structured = json{{"facts", json::parse(row[*facts_column])},
                                   {"query", json::array({pair->second, pair->first})}};
      } catch (const json::parse_error&) {
        fail("facts column is not JSON");
      }
    }
    try {
      validate_instance(instance, aliases);
    } catch (const Error& e) {
      fail(e.what());
    }
    out.push_back(std::move(instance));
  }
  return out;
}

std::vector<TaskInstance> load_clutrr(const fs::path& path, const AliasTable& aliases) {
  return parse_clutrr(read_file(path), aliases);
}

TaskKind bbh_task(std::string_view subtask) {
  if (subtask.starts_with("tracking_shuffled_objects_")) return TaskKind::dynamic_entity_prediction;
  if (subtask.starts_with("logical_deduction_")) return TaskKind::graph_sorting;
  if (subtask == "penguins_in_a_table" || subtask == "reasoning_about_colored_objects") return TaskKind::graph_query;
  throw Error(Errc::unknown_subtask, "unknown BBH subtask '" + std::string(subtask) + "'");
}

namespace {

std::string bbh_bucket(std::string_view subtask) {
  for (auto [suffix, bucket] : {std::pair{"_three_objects", "3"}, std::pair{"_five_objects", "5"},
                                std::pair{"_seven_objects", "7"}}) {
    if (subtask.ends_with(suffix)) return bucket;
  }
  if (bbh_task(subtask) == TaskKind::graph_query) return std::string(subtask);
  throw Error(Errc::unknown_subtask, "BBH subtask '" + std::string(subtask) + "' names no object count");
}

}  // namespace

std::vector<TaskInstance> parse_bbh(const json& j, std::string_view subtask) {
  const TaskKind task = bbh_task(subtask);
  const std::string bucket = bbh_bucket(subtask);
  if (!j.is_object() || !j.contains("examples") || !j["examples"].is_array()) {
    throw Error(Errc::schema_mismatch, "BBH file needs an 'examples' array");
  }
  std::vector<TaskInstance> out;
  std::size_t index = 0;
  for (const auto& example : j["examples"]) {
    const std::string where = std::string(subtask) + "-" + std::to_string(index++);
    const std::string input = require_string(example, "input", where);
    const std::string target = require_string(example, "target", where);
    BbhParts parts = split_bbh_input(input);
    if (parts.options.empty()) throw Error(Errc::schema_mismatch, where + ": input lists no options", {where});
    TaskInstance instance;
    instance.id = example.contains("id") && example["id"].is_string() ? example["id"].get<std::string>() : where;
    instance.task = task;
    instance.story = std::move(parts.story);
    instance.question = std::move(parts.question);
    instance.options = std::move(parts.options);
    instance.gold = {AnswerKind::option, target_letter(target)};
    instance.bucket = bucket;
    if (example.contains("structured")) instance.structured = example["structured"];
    try {
      validate_instance(instance);
    } catch (const Error&) {
      throw Error(Errc::schema_mismatch, where + ": target " + target + " is not a listed option", {where});
    }
    out.push_back(std::move(instance));
  }
  return out;
}

std::vector<TaskInstance> load_bbh(const fs::path& path, std::string_view subtask) {
  return parse_bbh(parse_json_file(path), subtask);
}

std::string render_paragraphs(const json& context) {
  if (!context.is_array()) throw Error(Errc::schema_mismatch, "context must be an array of [title, sentences]");
  std::string out;
  std::size_t n = 0;
  for (const auto& paragraph : context) {
    if (!paragraph.is_array() || paragraph.size() != 2 || !paragraph[0].is_string()) {
      throw Error(Errc::schema_mismatch, "context paragraph must be [title, sentences]");
    }
    std::string body;
    if (paragraph[1].is_string()) {
      body = paragraph[1].get<std::string>();
    } else if (paragraph[1].is_array()) {
      for (const auto& s : paragraph[1]) {
        if (!s.is_string()) throw Error(Errc::schema_mismatch, "context sentences must be strings");
        body += s.get<std::string>();
      }
    } else {
      throw Error(Errc::schema_mismatch, "context sentences must be a string or an array");
    }
    if (n > 0) out += '\n';
    out += "Paragraph " + std::to_string(n++) + " " + paragraph[0].get<std::string>() + ": " +
           std::string(text::trim(body));
  }
  return out;
}

std::vector<TaskInstance> parse_hotpotqa(const json& j, std::optional<std::size_t> limit, std::uint64_t seed) {
  if (!j.is_array()) throw Error(Errc::schema_mismatch, "HotpotQA file must be a JSON array");
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_object()) throw Error(Errc::schema_mismatch, "HotpotQA entry " + std::to_string(i) + " is not an object");
    if (row.contains("type") && row["type"] != "bridge") continue;
    if (row.contains("level") && row["level"] != "hard") continue;
    eligible.push_back(i);
  }
  if (limit && *limit < eligible.size()) {
    // Partial Fisher-Yates with a fixed generator; std::shuffle's output is
    // not portable across standard libraries.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < *limit; ++i) {
      const std::size_t j_pick = i + static_cast<std::size_t>(rng() % (eligible.size() - i));
      std::swap(eligible[i], eligible[j_pick]);
    }
    eligible.resize(*limit);
    std::sort(eligible.begin(), eligible.end());
  }
  std::vector<TaskInstance> out;
  for (std::size_t i : eligible) {
    const auto& row = j[i];
    const std::string where = "hotpotqa entry " + std::to_string(i);
    TaskInstance instance;
    instance.id = row.contains("_id") && row["_id"].is_string() ? row["_id"].get<std::string>()
                                                                 : "hotpotqa-" + std::to_string(i);
    instance.task = TaskKind::complex_entity_prediction;
    if (!row.contains("context")) throw Error(Errc::schema_mismatch, where + ": missing 'context'", {where});
    instance.story = render_paragraphs(row["context"]);
    instance.question = require_string(row, "question", where);
    instance.gold = {AnswerKind::entity, require_string(row, "answer", where)};
    instance.bucket = std::string(kHotpotBucket);
    if (row.contains("structured")) instance.structured = row["structured"];
    validate_instance(instance);
    out.push_back(std::move(instance));
  }
  return out;
}

std::vector<TaskInstance> load_hotpotqa(const fs::path& path, std::optional<std::size_t> limit, std::uint64_t seed) {
  return parse_hotpotqa(parse_json_file(path), limit, seed);
}

std::vector<TaskInstance> parse_entailmentbank(std::string_view jsonl) {
  std::vector<TaskInstance> out;
  std::size_t line_no = 0;
  for (const auto& raw : text::split_lines(jsonl)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(Errc::schema_mismatch, where + ": " + e.what(), {where});
    }
    std::size_t steps = 0;
    if (row.contains("length_of_proof") && row["length_of_proof"].is_number_integer()) {
      steps = row["length_of_proof"].get<std::size_t>();
    } else if (row.contains("proof") && row["proof"].is_string()) {
      const std::string proof = row["proof"].get<std::string>();
      for (auto at = proof.find("->"); at != std::string::npos; at = proof.find("->", at + 2)) ++steps;
    } else {
      throw Error(Errc::schema_mismatch, where + ": needs 'length_of_proof' or 'proof'", {where});
    }
    if (steps < 1 || steps > 6) continue;

    TaskInstance instance;
    instance.id = row.contains("id") && row["id"].is_string() ? row["id"].get<std::string>()
                                                               : "entailment-" + std::to_string(line_no);
    instance.task = TaskKind::logical_inference;
    try {
      const auto lines = sentences_of(row);
      instance.story = text::join(lines, "\n");
    } catch (const Error& e) {
      throw Error(Errc::schema_mismatch, where + ": " + e.what(), {where});
    }
    instance.question = require_string(row, "question", where);
    instance.gold = {AnswerKind::entity, require_string(row, "answer", where)};
    instance.bucket = std::to_string(steps);
    if (row.contains("structured")) instance.structured = row["structured"];
    validate_instance(instance);
    out.push_back(std::move(instance));
  }
  return out;
}

std::vector<TaskInstance> load_entailmentbank(const fs::path& path) { return parse_entailmentbank(read_file(path)); }

std::vector<std::pair<std::string, std::size_t>> bucket_histogram(std::span<const TaskInstance> instances) {
  if (instances.empty()) return {};
  const TaskKind task = instances.front().task;
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& b : bucket_scheme(task)) out.emplace_back(b, 0);
  for (const auto& i : instances) {
    if (i.task != task) {
      throw Error(Errc::mixed_tasks, "histogram over several task kinds: " + std::string(to_string(task)) + " and " +
                                         std::string(to_string(i.task)));
    }
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == i.bucket; });
    if (it == out.end()) throw Error(Errc::validation, "instance " + i.id + " has off-scheme bucket " + i.bucket);
    ++it->second;
  }
  return out;
}

void flag_too_long(std::vector<TaskInstance>& instances, std::size_t max_chars) {
  for (auto& i : instances) i.too_long = i.story.size() + i.question.size() > max_chars;
}

DatasetManifest parse_manifest(const json& j) {
  if (!j.is_object()) throw Error(Errc::schema_mismatch, "manifest must be an object");
  static const std::set<std::string> known{"name", "format", "file", "subtask", "limit", "aliases", "histogram"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error(Errc::schema_mismatch, "unknown manifest key '" + key + "'");
  }
  DatasetManifest m;
  m.name = require_string(j, "name", "manifest");
  m.format = require_string(j, "format", "manifest");
  static const std::set<std::string> formats{"clutrr", "bbh", "hotpotqa", "entailmentbank"};
  if (!formats.contains(m.format)) throw Error(Errc::schema_mismatch, "unknown dataset format '" + m.format + "'");
  m.file = require_string(j, "file", "manifest");
  if (j.contains("subtask")) m.subtask = require_string(j, "subtask", "manifest");
  if (j.contains("aliases")) m.aliases = require_string(j, "aliases", "manifest");
  if (j.contains("limit")) {
    if (!is_count(j["limit"])) throw Error(Errc::schema_mismatch, "manifest 'limit' must be a count");
    m.limit = j["limit"].get<std::size_t>();
  }
  if (j.contains("histogram")) {
    if (!j["histogram"].is_object()) throw Error(Errc::schema_mismatch, "manifest 'histogram' must be an object");
    for (const auto& [bucket, count] : j["histogram"].items()) {
      if (!is_count(count)) throw Error(Errc::schema_mismatch, "histogram counts must be counts");
      m.histogram.emplace(bucket, count.get<std::size_t>());
    }
  }
  return m;
}

Dataset load_dataset(const fs::path& dir) {
  Dataset d;
  d.manifest = parse_manifest(parse_json_file(dir / "manifest.json"));
  if (!d.manifest.aliases.empty()) d.aliases = load_aliases(dir / d.manifest.aliases);
  const fs::path file = dir / d.manifest.file;
  const std::string& format = d.manifest.format;
  if (format == "clutrr") {
    d.instances = load_clutrr(file, d.aliases);
  } else if (format == "bbh") {
    d.instances = load_bbh(file, d.manifest.subtask);
  } else if (format == "hotpotqa") {
    d.instances = load_hotpotqa(file, d.manifest.limit);
  } else if (format == "entailmentbank") {
    d.instances = load_entailmentbank(file);
  } else {
    throw Error(Errc::schema_mismatch, "unknown dataset format '" + format + "'");
  }
  return d;
}

}  // namespace sgp
