#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgp/prompts.hpp"
#include "sgp/structured.hpp"
#include "sgp/task.hpp"

// Uniform completion interface over a live chat-completions endpoint, a
// content-addressed replay cache and a deterministic mock oracle.
namespace sgp {

enum class BackendKind { live, mock, cache };
std::string_view to_string(BackendKind kind) noexcept;

struct RequestMetadata {
  std::string instance_id;
  std::string task;
  std::string mode;
};

/// temperature in [0, 2], max_tokens > 0, messages non-empty.
struct CompletionRequest {
  std::string model = "gpt-4";
  std::vector<Message> messages;
  double temperature = 0.0;
  int max_tokens = 1024;
  RequestMetadata metadata;  // excluded from cache_key

  /// Throws Error(validation).
  void validate() const;
};

struct TokenUsage {
  std::size_t prompt = 0;
  std::size_t completion = 0;
};

struct CompletionResult {
  std::string text;  // may be empty
  BackendKind backend = BackendKind::mock;
  double latency_ms = 0.0;
  std::optional<TokenUsage> token_usage;
};

/// The chat-completions request body: model, messages, temperature, max_tokens.
nlohmann::json wire_body(const CompletionRequest& request);

/// sha256 over the wire body; identical across processes and metadata.
std::string cache_key(const CompletionRequest& request);

class Backend {
 public:
  virtual ~Backend() = default;
  /// Safe to call from many threads at once.
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
};

// ---------------------------------------------------------------------------
// Live HTTP backend

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// POSTs a JSON body. Network-level failures throw Error(transport); any HTTP
/// status is returned as is.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post_json(const std::string& path, const std::string& body,
                                 const std::map<std::string, std::string>& headers) = 0;
};

/// cpp-httplib transport for "scheme://host[:port][/prefix]".
std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url,
                                                   std::chrono::seconds timeout = std::chrono::seconds(120));

/// Attempt k (0-based) failing transiently waits base_delay * factor^k,
/// scaled by a uniform factor in [1 - jitter, 1 + jitter].
struct RetryPolicy {
  std::size_t max_retries = 4;  // retries after the first attempt
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  double jitter = 0.2;
};

struct LiveConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::size_t max_concurrency = 4;
  RetryPolicy retry;
  std::optional<std::size_t> token_budget;  // prompt + completion tokens across all calls
  std::uint64_t jitter_seed = 0;
};

/// Value of SGP_API_KEY, or an empty string.
std::string api_key_from_env();

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// 401/403 throw AuthError at once. 429, 5xx and network failures are
/// retried; once retries run out 429 throws RateLimited, the rest
/// TransportError. Other statuses and malformed bodies throw TransportError.
/// At most max_concurrency requests are in flight at any time.
class LiveBackend final : public Backend {
 public:
  /// Throws Error(auth) without an API key, Error(config) on a zero bound.
  LiveBackend(LiveConfig config, std::unique_ptr<HttpTransport> transport, Sleeper sleeper = {});

  CompletionResult complete(const CompletionRequest& request) override;

  [[nodiscard]] std::size_t tokens_used() const;
  [[nodiscard]] std::chrono::milliseconds backoff_delay(std::size_t attempt);

 private:
  HttpResponse send(const std::string& body);

  LiveConfig config_;
  std::unique_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  std::string path_;

  mutable std::mutex mutex_;
  std::condition_variable slot_free_;
  std::size_t in_flight_ = 0;
  std::size_t tokens_used_ = 0;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Replay cache

/// Stores one JSON record per request under `<dir>/<cache_key>.json`
/// (request, response, timestamp). Hits never reach the inner backend;
/// failed completions are never stored. Without an inner backend a miss
/// throws Error(transport).
class CacheBackend final : public Backend {
 public:
  CacheBackend(std::filesystem::path dir, std::shared_ptr<Backend> inner);

  CompletionResult complete(const CompletionRequest& request) override;

  [[nodiscard]] std::optional<std::string> lookup(const CompletionRequest& request) const;
  [[nodiscard]] std::filesystem::path entry_path(const CompletionRequest& request) const;
  [[nodiscard]] std::size_t hits() const;
  [[nodiscard]] std::size_t misses() const;

 private:
  std::filesystem::path dir_;
  std::shared_ptr<Backend> inner_;
  mutable std::mutex mutex_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

struct CacheStats {
  std::size_t entries = 0;
  std::uintmax_t bytes = 0;
};

CacheStats cache_stats(const std::filesystem::path& dir);
/// Removes every "*.json" record; returns how many were removed.
std::size_t cache_clear(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Mock oracle

enum class FaultMode { none, corrupt_conclusion };
std::string_view to_string(FaultMode mode) noexcept;
FaultMode parse_fault_mode(std::string_view name);

struct MockConfig {
  FaultMode fault = FaultMode::none;
  double fault_rate = 1.0;  // share of instances whose conclusion is corrupted
};

/// Whether the fault hits this instance: a fixed function of the id, so that
/// reruns corrupt the same instances.
bool fault_selected(std::string_view instance_id, double rate);

/// A stated answer that disagrees with the solution: the next option letter,
/// another kinship kind, the number plus one, or an unrelated entity.
std::string corrupt_answer(const TaskInstance& instance, const StructuredSolution& solution);

/// Transcript in case-study form: numbered blocks of triples (the graph,
/// then one block per step), the conclusion triple, and a final
/// "Therefore, option (X) is correct." or "So the answer is: Y." line.
std::string render_transcript(const TaskInstance& instance, const StructuredSolution& solution,
                              std::optional<std::string> stated_override = std::nullopt);

/// Runs solve_structured and renders its transcript, corrupting the
/// conclusion when the fault applies. Throws Error(unsupported_task).
CompletionResult mock_complete(const TaskInstance& instance, const MockConfig& config = {});

/// Looks instances up by request.metadata.instance_id.
class MockBackend final : public Backend {
 public:
  MockBackend(std::vector<TaskInstance> instances, MockConfig config = {});

  CompletionResult complete(const CompletionRequest& request) override;

 private:
  std::map<std::string, TaskInstance> instances_;
  MockConfig config_;
};

}  // namespace sgp
