#include "sgp/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "sgp/datasets.hpp"
#include "sgp/error.hpp"
#include "sgp/evaluator.hpp"
#include "sgp/gateway.hpp"
#include "sgp/prompts.hpp"
#include "sgp/strategies.hpp"
#include "sgp/structured.hpp"
#include "sgp/text.hpp"
#include "sgp/textgraph.hpp"

namespace sgp {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::validation:
    case Errc::schema_mismatch:
    case Errc::unparseable_row:
    case Errc::missing_column:
    case Errc::invalid_event:
    case Errc::unknown_task:
    case Errc::unknown_mode:
    case Errc::unknown_subtask:
    case Errc::io:
      return kExitUsage;
    case Errc::unanswerable:
    case Errc::undefined_composition:
    case Errc::ambiguous:
    case Errc::inconsistent:
    case Errc::underdetermined:
    case Errc::unprovable:
    case Errc::no_path:
    case Errc::entity_not_found:
    case Errc::missing_attribute:
      return kExitUnanswerable;
    case Errc::all_instances_failed:
      return kExitAllFailed;
    default:
      return kExitFailure;
  }
}

std::vector<Triple> read_triples(const std::string& path) {
  const std::string content = read_file(path);
  const TripleExtraction extraction = extract_triples(content);
  if (extraction.diagnostics.skipped_lines > 0) {
    throw Error(Errc::validation, path + ": " + std::to_string(extraction.diagnostics.skipped_lines) +
                                      " line(s) look like triples but do not parse");
  }
  auto triples = extraction.all();
  if (triples.empty()) throw Error(Errc::validation, path + ": no (subject, relation, object) lines found");
  return triples;
}

std::vector<std::string> content_lines(const std::string& path) {
  std::vector<std::string> out;
  for (const auto& raw : text::split_lines(read_file(path))) {
    const auto line = text::trim(raw);
    if (!line.empty() && line.front() != '#') out.emplace_back(line);
  }
  return out;
}

TaskKind solve_task(std::string_view name) {
  if (name == "relation") return TaskKind::relation_prediction;
  if (name == "dynamic") return TaskKind::dynamic_entity_prediction;
  if (name == "complex" || name == "chain") return TaskKind::complex_entity_prediction;
  if (name == "sort") return TaskKind::graph_sorting;
  if (name == "query") return TaskKind::graph_query;
  if (name == "logical") return TaskKind::logical_inference;
  return parse_task(name);
}

struct SolveArgs {
  std::string task;
  std::string facts;
  std::vector<std::string> pair;
  std::string events;
  std::vector<std::string> functional;
  std::string entity;
  std::string relation;
  std::string anchor;
  std::vector<std::string> hops;
  std::string constraints;
  std::size_t position = 0;
  std::string table;
  std::string row_class;
  std::vector<std::string> where;
  bool count = false;
  bool set = false;
  std::string last;
  std::string first;
  std::string rules;
  std::string goal;
  bool json = false;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::validation, what);
}

TaskInstance solve_instance(const SolveArgs& a) {
  TaskInstance instance;
  instance.id = "cli";
  instance.task = solve_task(a.task);
  json s;
  switch (instance.task) {
    case TaskKind::relation_prediction:
      require(!a.facts.empty() && a.pair.size() == 2, "relation needs --facts and --pair S O");
      s = {{"facts", triples_to_json(read_triples(a.facts))}, {"query", a.pair}};
      break;
    case TaskKind::dynamic_entity_prediction: {
      require(!a.facts.empty() && !a.events.empty() && !a.entity.empty() && !a.relation.empty(),
              "dynamic needs --facts, --events, --entity and --relation");
      json functional = a.functional.empty() ? json::array({a.relation}) : json(a.functional);
      s = {{"initial", triples_to_json(read_triples(a.facts))},
           {"functional", functional},
           {"events", content_lines(a.events)},
           {"query", {a.entity, a.relation}}};
      break;
    }
    case TaskKind::complex_entity_prediction: {
      require(!a.facts.empty() && !a.anchor.empty() && !a.hops.empty(), "complex needs --facts, --anchor and --hop");
      json hops = json::array();
      for (const auto& h : a.hops) {
        const bool inverse = h.starts_with("~");
        hops.push_back({{"relation", inverse ? h.substr(1) : h}, {"direction", inverse ? "inverse" : "forward"}});
      }
      s = {{"facts", triples_to_json(read_triples(a.facts))}, {"chain", {{"anchor", a.anchor}, {"hops", hops}}}};
      break;
    }
    case TaskKind::graph_sorting: {
      require(!a.constraints.empty() && a.position >= 1, "sort needs --constraints and --position (1-based)");
      const SortProblem problem = parse_sort_problem(read_file(a.constraints));
      json constraints = json::array();
      for (const auto& c : problem.constraints) constraints.push_back(to_text(c));
      s = {{"objects", problem.objects}, {"constraints", constraints}, {"position", a.position - 1}};
      break;
    }
    case TaskKind::graph_query: {
      require(!a.table.empty() || !a.facts.empty(), "query needs --table or --facts");
      const int projections = a.count + a.set + !a.last.empty() + !a.first.empty();
      require(projections <= 1, "choose one of --count, --set, --last, --first");
      std::string projection = "set";
      if (a.count) projection = "count";
      if (!a.last.empty()) projection = "last:" + a.last;
      if (!a.first.empty()) projection = "first:" + a.first;
      s = {{"where", a.where}, {"projection", projection}};
      if (!a.table.empty()) {
        s["table"] = read_file(a.table);
      } else {
        s["facts"] = triples_to_json(read_triples(a.facts));
      }
      if (!a.row_class.empty()) s["class"] = a.row_class;
      break;
    }
    case TaskKind::logical_inference: {
      require(!a.facts.empty() && !a.rules.empty() && !a.goal.empty(), "logical needs --facts, --rules and --goal");
      s = {{"facts", triples_to_json(read_triples(a.facts))}, {"rules", content_lines(a.rules)}, {"goal", a.goal}};
      break;
    }
  }
  instance.structured = std::move(s);
  return instance;
}

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  const TaskInstance instance = solve_instance(args);
  const StructuredSolution solution = solve_structured(instance);
  const std::string transcript = render_transcript(instance, solution);
  if (args.json) {
    json j{{"task", std::string(to_string(instance.task))},
           {"answer", solution.answer},
           {"conclusion", to_text(solution.conclusion)},
           {"transcript", transcript}};
    out << j.dump(2) << "\n";
  } else {
    out << solution.answer << "\n\n" << transcript;
  }
  return kExitOk;
}

struct RunArgs {
  std::string config;
  std::string dataset;
  std::string modes;
  std::string backend;
  std::string model;
  std::string base_url;
  std::string out_dir;
  std::string cache_dir;
  std::string fault;
  std::optional<double> fault_rate;
  std::optional<std::size_t> concurrency;
  std::optional<std::size_t> max_retries;
  std::optional<std::size_t> token_budget;
  bool json = false;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  RunConfig config = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  json overrides = json::object();
  if (!a.dataset.empty()) overrides["dataset"] = a.dataset;
  if (!a.modes.empty()) overrides["modes"] = a.modes;
  if (!a.backend.empty()) overrides["backend"] = a.backend;
  if (!a.model.empty()) overrides["model"] = a.model;
  if (!a.base_url.empty()) overrides["base_url"] = a.base_url;
  if (!a.out_dir.empty()) overrides["output_dir"] = a.out_dir;
  if (!a.cache_dir.empty()) overrides["cache_dir"] = a.cache_dir;
  if (!a.fault.empty()) overrides["fault"] = a.fault;
  if (a.fault_rate) overrides["fault_rate"] = *a.fault_rate;
  if (a.concurrency) overrides["max_concurrency"] = *a.concurrency;
  if (a.max_retries) overrides["max_retries"] = *a.max_retries;
  if (a.token_budget) overrides["token_budget"] = *a.token_budget;
  apply_config_json(config, overrides);
  config.validate();
  if (config.dataset.empty()) throw Error(Errc::config, "no dataset: pass --dataset or set 'dataset' in the config");

  Dataset dataset;
  try {
    dataset = load_dataset(config.dataset);
  } catch (const Error& e) {
    throw Error(Errc::config, "cannot load dataset " + config.dataset + ": " + e.what());
  }
  flag_too_long(dataset.instances, config.max_prompt_chars);
  auto backend = make_backend(config, dataset.instances);
  EvalReport report = run_suite(config, dataset.instances, *backend, dataset.aliases);
  report.provenance["dataset"] = dataset.manifest.name;
  const auto written = emit_report(report, config.output_dir);

  if (a.json) {
    json cells = records_json(report)["cells"];
    out << json{{"output_dir", config.output_dir.string()}, {"cells", cells}}.dump(2) << "\n";
  } else {
    out << format_matrix(report);
    std::size_t errors = 0;
    for (const auto& r : report.records) errors += r.error ? 1 : 0;
    out << report.records.size() << " records, " << errors << " failed; report written to "
        << config.output_dir.string() << "\n";
  }
  return kExitOk;
}

EvalReport report_from_records(const json& j) {
  EvalReport report;
  report.task = parse_task(j.at("task").get<std::string>());
  for (const auto& m : j.at("modes")) report.modes.push_back(parse_mode(m.get<std::string>()));
  report.buckets = j.at("buckets").get<std::vector<std::string>>();
  for (const auto& c : j.at("cells")) {
    Cell cell;
    cell.total = c.at("total").get<std::size_t>();
    cell.correct = c.at("correct").get<std::size_t>();
    cell.errors = c.at("errors").get<std::size_t>();
    cell.inconsistent = c.at("inconsistent").get<std::size_t>();
    if (cell.total > 0) {
      report.cells[{parse_mode(c.at("mode").get<std::string>()), c.at("bucket").get<std::string>()}] = cell;
    }
  }
  return report;
}

struct ReportArgs {
  std::string dir;
  std::string reference;
  std::string task;
  bool csv = false;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  EvalReport report;
  if (!a.reference.empty()) {
    if (a.task.empty()) throw Error(Errc::validation, "--reference needs --task");
    report = report_from_matrix(parse_task(a.task), read_file(a.reference));
  } else {
    if (a.dir.empty()) throw Error(Errc::validation, "report needs a report directory or --reference");
    try {
      report = report_from_records(json::parse(read_file(fs::path(a.dir) / "records.json")));
    } catch (const json::exception& e) {
      throw Error(Errc::schema_mismatch, std::string("records.json: ") + e.what());
    }
  }
  out << (a.csv ? matrix_csv(report) : format_matrix(report));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure guided prompting: deterministic solvers, prompt registry and evaluation runner", "sgp"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run a deterministic strategy and print its derivation");
  solve_cmd->add_option("task", solve.task, "relation, dynamic, complex, sort, query or logical")->required();
  solve_cmd->add_option("--facts", solve.facts, "File with one (subject, relation, object) per line");
  solve_cmd->add_option("--pair", solve.pair, "relation: S O, answers \"S is O's ?\"")->expected(2);
  solve_cmd->add_option("--events", solve.events, "dynamic: file with swap(a, b, r) / assign(e, r, v) lines");
  solve_cmd->add_option("--functional", solve.functional, "dynamic: functional relation (repeatable)");
  solve_cmd->add_option("--entity", solve.entity, "dynamic: queried entity");
  solve_cmd->add_option("--relation", solve.relation, "dynamic: queried relation");
  solve_cmd->add_option("--anchor", solve.anchor, "complex: starting entity");
  solve_cmd->add_option("--hop", solve.hops, "complex: relation to follow, ~relation to follow backwards");
  solve_cmd->add_option("--constraints", solve.constraints, "sort: objects line plus one constraint per line");
  solve_cmd->add_option("--position", solve.position, "sort: 1-based position from the left");
  solve_cmd->add_option("--table", solve.table, "query: CSV table, one row per object");
  solve_cmd->add_option("--class", solve.row_class, "query: class of the table rows");
  solve_cmd->add_option("--where", solve.where, "query: condition such as age>5 (repeatable, conjunctive)");
  solve_cmd->add_flag("--count", solve.count, "query: count the matches");
  solve_cmd->add_flag("--set", solve.set, "query: list the matches");
  solve_cmd->add_option("--last", solve.last, "query: match that sorts last by this attribute");
  solve_cmd->add_option("--first", solve.first, "query: match that sorts first by this attribute");
  solve_cmd->add_option("--rules", solve.rules, "logical: file with one IF ... THEN ... rule per line");
  solve_cmd->add_option("--goal", solve.goal, "logical: goal pattern such as \"(ice cube, undergoes process, ?p)\"");
  solve_cmd->add_flag("--json", solve.json, "Machine-readable output");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a dataset over prompt modes and write a report");
  run_cmd->add_option("--config", run.config, "Flat JSON config file; flags override it");
  run_cmd->add_option("--dataset", run.dataset, "Dataset directory holding manifest.json");
  run_cmd->add_option("--mode", run.modes, "Comma list of naive, zero_cot, sgp");
  run_cmd->add_option("--backend", run.backend, "mock, live or cache");
  run_cmd->add_option("--model", run.model, "Model name for live runs");
  run_cmd->add_option("--base-url", run.base_url, "Chat-completions base URL");
  run_cmd->add_option("--out", run.out_dir, "Report directory");
  run_cmd->add_option("--cache-dir", run.cache_dir, "Replay cache directory");
  run_cmd->add_option("--fault", run.fault, "Mock fault mode: none or corrupt_conclusion");
  run_cmd->add_option("--fault-rate", run.fault_rate, "Share of instances the fault hits");
  run_cmd->add_option("--concurrency", run.concurrency, "Worker and in-flight request bound");
  run_cmd->add_option("--max-retries", run.max_retries, "Retries after the first attempt");
  run_cmd->add_option("--token-budget", run.token_budget, "Token cap for live runs");
  run_cmd->add_flag("--json", run.json, "Machine-readable output");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Print the accuracy matrix of a report or reference table");
  report_cmd->add_option("dir", report.dir, "Report directory written by run");
  report_cmd->add_option("--reference", report.reference, "Reference matrix CSV");
  report_cmd->add_option("--task", report.task, "Task kind of the reference table");
  report_cmd->add_flag("--csv", report.csv, "Print the matrix CSV instead of a table");

  std::string dump_task;
  std::string dump_mode;
  auto* dump_cmd = app.add_subcommand("prompt-dump", "Print a prompt template verbatim");
  dump_cmd->add_option("task", dump_task, "Task kind")->required();
  dump_cmd->add_option("mode", dump_mode, "naive, zero_cot or sgp")->required();

  std::string cache_action;
  std::string cache_dir = ".sgp-cache";
  auto* cache_cmd = app.add_subcommand("cache", "Inspect or clear the replay cache");
  cache_cmd->add_option("action", cache_action, "stats or clear")->required()->check(CLI::IsMember({"stats", "clear"}));
  cache_cmd->add_option("--dir", cache_dir, "Cache directory");

  std::vector<const char*> argv{"sgp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*run_cmd) return cmd_run(run, out);
    if (*report_cmd) return cmd_report(report, out);
    if (*dump_cmd) {
      out << template_file_text(parse_task(dump_task), parse_mode(dump_mode));
      return kExitOk;
    }
    if (*cache_cmd) {
      if (cache_action == "stats") {
        const CacheStats stats = cache_stats(cache_dir);
        out << stats.entries << " entries, " << stats.bytes << " bytes in " << cache_dir << "\n";
      } else {
        out << cache_clear(cache_dir) << " entries removed from " << cache_dir << "\n";
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (*run_cmd) {
      if (e.code() == Errc::all_instances_failed) return kExitAllFailed;
      return kExitFailure;
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sgp
