#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sgp/csv.hpp"
#include "sgp/error.hpp"
#include "sgp/evaluator.hpp"
#include "sgp/text.hpp"

namespace sgp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> kept_buckets(const EvalReport& report) {
  std::vector<std::string> kept;
  for (const auto& b : report.buckets) {
    for (auto mode : report.modes) {
      if (!report.cell(mode, b).empty()) {
        kept.push_back(b);
        break;
      }
    }
  }
  return kept;
}

json answer_json(const std::optional<ParsedAnswer>& a) {
  if (!a) return nullptr;
  return {{"kind", std::string(to_string(a->kind))}, {"value", a->value}, {"raw_span", a->raw_span}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(Errc::io, "short write to " + path.string());
}

}  // namespace

std::string matrix_csv(const EvalReport& report) {
  const auto buckets = kept_buckets(report);
  csv::Row header{"mode"};
  header.insert(header.end(), buckets.begin(), buckets.end());
  std::string out = csv::format_row(header) + "\n";
  for (auto mode : report.modes) {
    csv::Row row{std::string(to_string(mode))};
    for (const auto& b : buckets) {
      const Cell& c = report.cell(mode, b);
      row.push_back(c.empty() ? std::string() : text::format_number(c.accuracy()));
    }
    out += csv::format_row(row) + "\n";
  }
  return out;
}

std::string plot_csv(const EvalReport& report) {
  std::string out = "bucket,mode,accuracy\n";
  for (const auto& b : report.buckets) {
    for (auto mode : report.modes) {
      const Cell& c = report.cell(mode, b);
      if (c.empty()) continue;
      out += csv::format_row({b, std::string(to_string(mode)), text::format_number(c.accuracy())}) + "\n";
    }
  }
  return out;
}

json records_json(const EvalReport& report) {
  json cells = json::array();
  for (auto mode : report.modes) {
    for (const auto& b : report.buckets) {
      const Cell& c = report.cell(mode, b);
      cells.push_back({{"mode", std::string(to_string(mode))},
                       {"bucket", b},
                       {"total", c.total},
                       {"correct", c.correct},
                       {"errors", c.errors},
                       {"inconsistent", c.inconsistent},
                       {"accuracy", c.empty() ? json(nullptr) : json(c.accuracy())},
                       {"inconsistency_rate", c.total == 0 ? json(nullptr) : json(c.inconsistency_rate())}});
    }
  }
  json records = json::array();
  for (const auto& r : report.records) {
    json evidence = r.consistency.evidence;
    records.push_back({{"instance_id", r.instance_id},
                       {"mode", std::string(to_string(r.mode))},
                       {"bucket", r.bucket},
                       {"prompt_fingerprint", r.prompt_fingerprint},
                       {"template_fingerprint", r.template_fingerprint},
                       {"raw_response", r.raw_response},
                       {"parsed", answer_json(r.parsed)},
                       {"gold", {{"kind", std::string(to_string(r.gold.kind))}, {"value", r.gold.value}}},
                       {"correct", r.correct},
                       {"consistency",
                        {{"status", std::string(to_string(r.consistency.status))},
                         {"derived", answer_json(r.consistency.derived)},
                         {"stated", answer_json(r.consistency.stated)},
                         {"evidence", evidence}}},
                       {"diagnostics",
                        {{"triples", r.diagnostics.triples},
                         {"blocks", r.diagnostics.blocks},
                         {"skipped_lines", r.diagnostics.skipped_lines}}},
                       {"error", r.error ? json(*r.error) : json(nullptr)}});
  }
  json modes = json::array();
  for (auto m : report.modes) modes.push_back(std::string(to_string(m)));
  return {{"task", std::string(to_string(report.task))},
          {"modes", modes},
          {"buckets", report.buckets},
          {"cells", cells},
          {"records", records}};
}

std::vector<fs::path> emit_report(const EvalReport& report, const fs::path& dir, const std::set<ReportFormat>& formats) {
  if (report.records.empty() && report.cells.empty()) throw Error(Errc::io, "refusing to emit an empty report");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  auto emit = [&](const char* name, const std::string& content) {
    write_file(dir / name, content);
    written.push_back(dir / name);
  };
  if (formats.contains(ReportFormat::json)) emit("records.json", records_json(report).dump(2) + "\n");
  if (formats.contains(ReportFormat::matrix_csv)) emit("matrix.csv", matrix_csv(report));
  if (formats.contains(ReportFormat::plot_csv)) emit("plotdata.csv", plot_csv(report));
  emit("provenance.json", report.provenance.dump(2) + "\n");
  return written;
}

EvalReport report_from_matrix(TaskKind task, std::string_view csv_text) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty() || rows.front().empty() || text::trim(rows.front().front()) != "mode") {
    throw Error(Errc::schema_mismatch, "matrix must start with a 'mode' header column");
  }
  EvalReport report;
  report.task = task;
  const auto& scheme = bucket_scheme(task);
  for (std::size_t c = 1; c < rows.front().size(); ++c) {
    const std::string bucket(text::trim(rows.front()[c]));
    if (std::find(scheme.begin(), scheme.end(), bucket) == scheme.end()) {
      throw Error(Errc::schema_mismatch, "bucket '" + bucket + "' is not in the task's scheme");
    }
    report.buckets.push_back(bucket);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows.front().size()) {
      throw Error(Errc::unparseable_row, "row " + std::to_string(r) + " has the wrong width", {std::to_string(r)});
    }
    const PromptMode mode = parse_mode(text::trim(row.front()));
    report.modes.push_back(mode);
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (text::trim(row[c]).empty()) continue;
      const auto value = text::parse_numeric_literal(row[c]);
      if (!value) throw Error(Errc::unparseable_row, "row " + std::to_string(r) + ": '" + row[c] + "' is no number");
      report.cells[{mode, report.buckets[c - 1]}].reference_accuracy = *value;
    }
  }
  report.provenance = {{"reference", true}, {"task", std::string(to_string(task))}};
  return report;
}

std::string format_matrix(const EvalReport& report) {
  const auto buckets = kept_buckets(report);
  std::size_t width = 4;
  for (auto m : report.modes) width = std::max(width, to_string(m).size());
  std::ostringstream out;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  out << pad("mode", width);
  for (const auto& b : buckets) out << "  " << pad(b, std::max<std::size_t>(6, b.size()));
  out << "\n";
  for (auto m : report.modes) {
    out << pad(std::string(to_string(m)), width);
    for (const auto& b : buckets) {
      const Cell& c = report.cell(m, b);
      std::string v = "-";
      if (!c.empty()) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.3f", c.accuracy());
        v = buf;
      }
      out << "  " << pad(v, std::max<std::size_t>(6, b.size()));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace sgp
