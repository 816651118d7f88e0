#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include "sgp/error.hpp"
#include "sgp/gateway.hpp"

namespace sgp {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Write to a sibling temp file, then rename: readers never see a partial record.
void write_atomically(const fs::path& target, const std::string& content) {
  std::ostringstream suffix;
  suffix << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const fs::path tmp = target.string() + suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(Errc::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(Errc::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace

CacheBackend::CacheBackend(fs::path dir, std::shared_ptr<Backend> inner) : dir_(std::move(dir)), inner_(std::move(inner)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(Errc::io, "cannot create cache directory " + dir_.string() + ": " + ec.message());
}

fs::path CacheBackend::entry_path(const CompletionRequest& request) const {
  return dir_ / (cache_key(request) + ".json");
}

std::optional<std::string> CacheBackend::lookup(const CompletionRequest& request) const {
  std::ifstream in(entry_path(request), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const auto record = nlohmann::json::parse(in);
    return record.at("response").at("text").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;  // a corrupt record counts as a miss and is rewritten
  }
}

CompletionResult CacheBackend::complete(const CompletionRequest& request) {
  request.validate();
  const auto start = std::chrono::steady_clock::now();
  if (auto text = lookup(request)) {
    {
      std::lock_guard lock(mutex_);
      ++hits_;
    }
    CompletionResult hit;
    hit.text = std::move(*text);
    hit.backend = BackendKind::cache;
    hit.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return hit;
  }
  {
    std::lock_guard lock(mutex_);
    ++misses_;
  }
  if (!inner_) throw Error(Errc::transport, "cache miss for " + cache_key(request) + " and no backend to ask");

  CompletionResult result = inner_->complete(request);
  nlohmann::json record{{"key", cache_key(request)},
                        {"request", wire_body(request)},
                        {"response", {{"text", result.text}, {"backend", std::string(to_string(result.backend))}}},
                        {"timestamp", utc_timestamp()}};
  if (result.token_usage) {
    record["response"]["token_usage"] = {{"prompt", result.token_usage->prompt},
                                         {"completion", result.token_usage->completion}};
  }
  std::lock_guard lock(mutex_);
  write_atomically(entry_path(request), record.dump(2) + "\n");
  return result;
}

std::size_t CacheBackend::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t CacheBackend::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

CacheStats cache_stats(const fs::path& dir) {
  CacheStats stats;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return stats;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      ++stats.entries;
      stats.bytes += entry.file_size();
    }
  }
  return stats;
}

std::size_t cache_clear(const fs::path& dir) {
  std::size_t removed = 0;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return 0;
  std::vector<fs::path> doomed;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") doomed.push_back(entry.path());
  }
  for (const auto& p : doomed) removed += fs::remove(p) ? 1 : 0;
  return removed;
}

}  // namespace sgp
