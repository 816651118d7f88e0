#include "sgp/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <thread>
#include <tuple>

#include "sgp/error.hpp"
#include "sgp/prompts.hpp"
#include "sgp/structured.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace {

using nlohmann::json;

// JSON built in code stores 5 as a signed integer; parsed text stores it as
// unsigned. Both are counts when non-negative.
bool is_count(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

std::string strip_letter(std::string_view v) {
  std::string out;
  for (char c : text::trim(v)) {
    if (c != '(' && c != ')' && c != ' ') out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

[[noreturn]] void incompatible(const ParsedAnswer& pred, AnswerKind policy) {
  throw Error(Errc::incompatible_kinds, "cannot score a " + std::string(to_string(pred.kind)) + " answer under the " +
                                            std::string(to_string(policy)) + " policy");
}

std::string iso_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string error_text(const Error& e) { return e.what(); }

struct PreparedInstance {
  const TaskInstance* instance = nullptr;
  std::optional<AuditQuery> audit;
};

InstanceRecord run_one(const RunConfig& config, const PreparedInstance& prepared, PromptMode mode, Backend& backend,
                       const AliasTable& aliases) {
  const TaskInstance& instance = *prepared.instance;
  const AnswerKind policy = answer_kind_for(instance.task);
  InstanceRecord record;
  record.instance_id = instance.id;
  record.task = instance.task;
  record.mode = mode;
  record.bucket = instance.bucket;
  record.gold = instance.gold;
  record.template_fingerprint = template_fingerprint(instance.task, mode);
  try {
    const PromptBundle bundle = render_prompt(instance.task, mode, instance);
    record.prompt_fingerprint = bundle.fingerprint;
    CompletionRequest request;
    request.model = config.model;
    request.messages = bundle.messages;
    request.temperature = config.temperature;
    request.max_tokens = config.max_tokens;
    request.metadata = {instance.id, std::string(to_string(instance.task)), std::string(to_string(mode))};
    record.raw_response = backend.complete(request).text;

    const ParsedResponse response = parse_response(record.raw_response, policy);
    record.diagnostics = {response.graph.all().size(), response.graph.diagnostics.blocks_found,
                          response.graph.diagnostics.skipped_lines};
    if (prepared.audit) {
      record.consistency = audit_consistency(record.raw_response, *prepared.audit, policy, instance.options);
    }
    if (!response.final_answer) throw Error(Errc::no_answer_found, "response states no final answer");
    ParsedAnswer parsed = *response.final_answer;
    if (policy == AnswerKind::option && parsed.kind != AnswerKind::option && !instance.options.empty()) {
      if (auto letter = resolve_option(instance.options, parsed.value, parsed.kind)) {
        parsed = ParsedAnswer{AnswerKind::option, *letter, parsed.raw_span};
      }
    }
    record.parsed = parsed;
    record.correct = score_instance(parsed, instance.gold, policy, aliases);
  } catch (const Error& e) {
    record.correct = false;
    record.error = error_text(e);
  } catch (const std::exception& e) {
    record.correct = false;
    record.error = std::string("InternalError: ") + e.what();
  }
  return record;
}

}  // namespace

bool score_instance(const ParsedAnswer& pred, const GoldAnswer& gold, AnswerKind policy, const AliasTable& aliases) {
  switch (policy) {
    case AnswerKind::option:
      if (pred.kind != AnswerKind::option) incompatible(pred, policy);
      return !strip_letter(pred.value).empty() && strip_letter(pred.value) == strip_letter(gold.value);
    case AnswerKind::relation:
      if (pred.kind != AnswerKind::relation && pred.kind != AnswerKind::entity) incompatible(pred, policy);
      return answers_equivalent(aliases.canonical(pred.value), aliases.canonical(gold.value), AnswerKind::relation);
    case AnswerKind::entity: {
      if (pred.kind == AnswerKind::option) incompatible(pred, policy);
      const std::string p = text::normalize_entity(pred.value);
      const std::string g = text::normalize_entity(gold.value);
      if (p.empty() || g.empty()) return false;
      return p.find(g) != std::string::npos || g.find(p) != std::string::npos;
    }
    case AnswerKind::number: {
      if (pred.kind == AnswerKind::option) incompatible(pred, policy);
      const auto p = text::parse_numeric_literal(text::normalize_answer(pred.value));
      const auto g = text::parse_numeric_literal(text::normalize_answer(gold.value));
      return p && g && *p == *g;
    }
  }
  return false;
}

std::string_view to_string(BackendChoice choice) noexcept {
  switch (choice) {
    case BackendChoice::live: return "live";
    case BackendChoice::mock: return "mock";
    case BackendChoice::cache: return "cache";
  }
  return "?";
}

BackendChoice parse_backend(std::string_view name) {
  if (name == "live") return BackendChoice::live;
  if (name == "mock") return BackendChoice::mock;
  if (name == "cache" || name == "cache-over-live") return BackendChoice::cache;
  throw Error(Errc::config, "unknown backend '" + std::string(name) + "' (live, mock, cache)");
}

void RunConfig::validate() const {
  if (modes.empty()) throw Error(Errc::config, "at least one mode is required");
  if (concurrency == 0) throw Error(Errc::config, "max_concurrency must be at least 1");
  if (!(temperature >= 0.0 && temperature <= 2.0)) throw Error(Errc::config, "temperature must lie in [0, 2]");
  if (max_tokens <= 0) throw Error(Errc::config, "max_tokens must be positive");
  if (!(fault_rate >= 0.0 && fault_rate <= 1.0)) throw Error(Errc::config, "fault_rate must lie in [0, 1]");
  if (model.empty()) throw Error(Errc::config, "model must be named");
}

json RunConfig::to_json() const {
  json m = json::array();
  for (auto mode : modes) m.push_back(std::string(to_string(mode)));
  json j{{"dataset", dataset},
         {"modes", m},
         {"backend", std::string(to_string(backend))},
         {"model", model},
         {"base_url", base_url},
         {"max_concurrency", concurrency},
         {"max_retries", max_retries},
         {"cache_dir", cache_dir},
         {"temperature", temperature},
         {"max_tokens", max_tokens},
         {"max_prompt_chars", max_prompt_chars},
         {"output_dir", output_dir.string()},
         {"seed", seed},
         {"fault", std::string(to_string(fault))},
         {"fault_rate", fault_rate}};
  j["token_budget"] = token_budget ? json(*token_budget) : json(nullptr);
  return j;
}

void apply_config_json(RunConfig& config, const json& j) {
  if (!j.is_object()) throw Error(Errc::config, "config must be a flat JSON object");
  auto need = [](const std::string& key, bool ok, const char* what) {
    if (!ok) throw Error(Errc::config, "config key '" + key + "' must be " + what);
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "dataset") {
      need(key, value.is_string(), "a string");
      config.dataset = value.get<std::string>();
    } else if (key == "modes") {
      std::vector<std::string> names;
      if (value.is_string()) {
        names = text::split(value.get<std::string>(), ',');
      } else {
        need(key, value.is_array(), "an array or a comma list");
        for (const auto& v : value) {
          need(key, v.is_string(), "an array of strings");
          names.push_back(v.get<std::string>());
        }
      }
      config.modes.clear();
      try {
        for (const auto& n : names) config.modes.push_back(parse_mode(text::trim(n)));
      } catch (const Error& e) {
        throw Error(Errc::config, e.what());
      }
    } else if (key == "backend") {
      need(key, value.is_string(), "a string");
      config.backend = parse_backend(value.get<std::string>());
    } else if (key == "model") {
      need(key, value.is_string(), "a string");
      config.model = value.get<std::string>();
    } else if (key == "base_url") {
      need(key, value.is_string(), "a string");
      config.base_url = value.get<std::string>();
    } else if (key == "max_concurrency") {
      need(key, is_count(value), "a non-negative integer");
      config.concurrency = value.get<std::size_t>();
    } else if (key == "max_retries") {
      need(key, is_count(value), "a non-negative integer");
      config.max_retries = value.get<std::size_t>();
    } else if (key == "cache_dir") {
      need(key, value.is_string(), "a string");
      config.cache_dir = value.get<std::string>();
    } else if (key == "token_budget") {
      need(key, value.is_null() || is_count(value), "null or a non-negative integer");
      config.token_budget = value.is_null() ? std::nullopt : std::optional(value.get<std::size_t>());
    } else if (key == "temperature") {
      need(key, value.is_number(), "a number");
      config.temperature = value.get<double>();
    } else if (key == "max_tokens") {
      need(key, value.is_number_integer(), "an integer");
      config.max_tokens = value.get<int>();
    } else if (key == "max_prompt_chars") {
      need(key, is_count(value), "a non-negative integer");
      config.max_prompt_chars = value.get<std::size_t>();
    } else if (key == "output_dir") {
      need(key, value.is_string(), "a string");
      config.output_dir = value.get<std::string>();
    } else if (key == "seed") {
      need(key, is_count(value), "a non-negative integer");
      config.seed = value.get<std::uint64_t>();
    } else if (key == "fault") {
      need(key, value.is_string(), "a string");
      config.fault = parse_fault_mode(value.get<std::string>());
    } else if (key == "fault_rate") {
      need(key, value.is_number(), "a number");
      config.fault_rate = value.get<double>();
    } else {
      throw Error(Errc::config, "unknown config key '" + key + "'");
    }
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  RunConfig config;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::config, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(Errc::config, e.what());
  }
  apply_config_json(config, j);
  return config;
}

std::unique_ptr<Backend> make_backend(const RunConfig& config, std::span<const TaskInstance> instances) {
  if (config.backend == BackendChoice::mock) {
    return std::make_unique<MockBackend>(std::vector<TaskInstance>(instances.begin(), instances.end()),
                                         MockConfig{config.fault, config.fault_rate});
  }
  LiveConfig live;
  live.base_url = config.base_url;
  live.api_key = api_key_from_env();
  live.max_concurrency = config.concurrency;
  live.retry.max_retries = config.max_retries;
  live.token_budget = config.token_budget;
  live.jitter_seed = config.seed;
  auto backend = std::make_unique<LiveBackend>(live, make_http_transport(config.base_url));
  if (config.backend == BackendChoice::live) return backend;
  return std::make_unique<CacheBackend>(config.cache_dir, std::shared_ptr<Backend>(std::move(backend)));
}

double Cell::accuracy() const {
  if (reference_accuracy) return *reference_accuracy;
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

double Cell::inconsistency_rate() const {
  return total == 0 ? 0.0 : static_cast<double>(inconsistent) / static_cast<double>(total);
}

const Cell& EvalReport::cell(PromptMode mode, std::string_view bucket) const {
  static const Cell empty_cell;
  auto it = cells.find({mode, std::string(bucket)});
  return it == cells.end() ? empty_cell : it->second;
}

std::map<std::pair<PromptMode, std::string>, Cell> aggregate(std::span<const InstanceRecord> records) {
  std::map<std::pair<PromptMode, std::string>, Cell> cells;
  for (const auto& r : records) {
    Cell& c = cells[{r.mode, r.bucket}];
    ++c.total;
    c.correct += r.correct ? 1 : 0;
    c.errors += r.error ? 1 : 0;
    c.inconsistent += r.consistency.status == ConsistencyStatus::inconsistent ? 1 : 0;
  }
  return cells;
}

EvalReport run_suite(const RunConfig& config, std::span<const TaskInstance> instances, Backend& backend,
                     const AliasTable& aliases) {
  config.validate();
  if (instances.empty()) throw Error(Errc::config, "no instances to evaluate");
  const TaskKind task = instances.front().task;
  for (const auto& i : instances) {
    if (i.task != task) throw Error(Errc::config, "a run covers one task kind; found several");
  }
  const std::string started = iso_utc_now();

  std::vector<PreparedInstance> prepared;
  for (const auto& i : instances) {
    PreparedInstance p{&i, std::nullopt};
    if (i.structured) {
      try {
        p.audit = solve_structured(i).audit;
      } catch (const Error&) {
        // Without a solvable structure the audit stays inconclusive.
      }
    }
    prepared.push_back(p);
  }

  std::vector<std::pair<std::size_t, PromptMode>> jobs;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    for (auto mode : config.modes) jobs.emplace_back(i, mode);
  }
  std::vector<InstanceRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    const std::size_t n = std::min(config.concurrency, jobs.size());
    for (std::size_t w = 0; w < n; ++w) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
          records[k] = run_one(config, prepared[jobs[k].first], jobs[k].second, backend, aliases);
        }
      });
    }
  }
  std::sort(records.begin(), records.end(), [](const InstanceRecord& a, const InstanceRecord& b) {
    return std::tie(a.instance_id, a.mode) < std::tie(b.instance_id, b.mode);
  });

  EvalReport report;
  report.task = task;
  report.modes = config.modes;
  report.buckets = bucket_scheme(task);
  report.cells = aggregate(records);
  report.records = std::move(records);

  json fingerprints = json::object();
  for (auto mode : config.modes) fingerprints[std::string(to_string(mode))] = template_fingerprint(task, mode);
  std::size_t too_long = 0;
  for (const auto& i : instances) too_long += i.too_long ? 1 : 0;
  report.provenance = {{"config", config.to_json()},
                       {"task", std::string(to_string(task))},
                       {"template_fingerprints", fingerprints},
                       {"instances", instances.size()},
                       {"too_long_instances", too_long},
                       {"started_at", started},
                       {"finished_at", iso_utc_now()}};

  const bool all_failed = std::all_of(report.records.begin(), report.records.end(),
                                      [](const InstanceRecord& r) { return r.error.has_value(); });
  if (all_failed) {
    throw Error(Errc::all_instances_failed,
                "every instance failed; first error: " + report.records.front().error.value_or("unknown"));
  }
  return report;
}

}  // namespace sgp
