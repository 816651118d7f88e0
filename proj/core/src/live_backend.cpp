#include <cmath>
#include <regex>
#include <thread>

#include <httplib.h>

#include "sgp/error.hpp"
#include "sgp/gateway.hpp"

namespace sgp {

namespace {

struct BaseUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // "" or "/v1"
};

BaseUrl split_base_url(const std::string& url) {
  static const std::regex pattern(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(url, m, pattern)) throw Error(Errc::config, "base_url must be http(s)://host[/path]: " + url);
  std::string prefix = m[2].str();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {m[1].str(), prefix};
}

class HttplibTransport final : public HttpTransport {
 public:
  HttplibTransport(const std::string& origin, std::chrono::seconds timeout) : origin_(origin), timeout_(timeout) {}

  HttpResponse post_json(const std::string& path, const std::string& body,
                         const std::map<std::string, std::string>& headers) override {
    // One client per call keeps the transport free of shared mutable state.
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto result = client.Post(path, h, body, "application/json");
    if (!result) throw Error(Errc::transport, "request failed: " + httplib::to_string(result.error()));
    return {result->status, result->body};
  }

 private:
  std::string origin_;
  std::chrono::seconds timeout_;
};

class InFlightSlot {
 public:
  InFlightSlot(std::mutex& m, std::condition_variable& cv, std::size_t& in_flight, std::size_t bound)
      : m_(m), cv_(cv), in_flight_(in_flight) {
    std::unique_lock lock(m_);
    cv_.wait(lock, [&] { return in_flight_ < bound; });
    ++in_flight_;
  }
  ~InFlightSlot() {
    {
      std::lock_guard lock(m_);
      --in_flight_;
    }
    cv_.notify_one();
  }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::mutex& m_;
  std::condition_variable& cv_;
  std::size_t& in_flight_;
};

bool transient(int status) { return status == 429 || status >= 500; }

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url, std::chrono::seconds timeout) {
  return std::make_unique<HttplibTransport>(split_base_url(base_url).origin, timeout);
}

LiveBackend::LiveBackend(LiveConfig config, std::unique_ptr<HttpTransport> transport, Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      rng_(config_.jitter_seed) {
  if (config_.api_key.empty()) throw Error(Errc::auth, "no API key: set SGP_API_KEY");
  if (config_.max_concurrency == 0) throw Error(Errc::config, "max_concurrency must be at least 1");
  if (!transport_) throw Error(Errc::config, "live backend needs a transport");
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  path_ = split_base_url(config_.base_url).prefix + "/chat/completions";
}

std::size_t LiveBackend::tokens_used() const {
  std::lock_guard lock(mutex_);
  return tokens_used_;
}

std::chrono::milliseconds LiveBackend::backoff_delay(std::size_t attempt) {
  double scale = 1.0;
  {
    std::lock_guard lock(mutex_);
    std::uniform_real_distribution<double> jitter(1.0 - config_.retry.jitter, 1.0 + config_.retry.jitter);
    scale = jitter(rng_);
  }
  const double ms = static_cast<double>(config_.retry.base_delay.count()) *
                    std::pow(config_.retry.factor, static_cast<double>(attempt)) * scale;
  return std::chrono::milliseconds(static_cast<long long>(std::llround(ms)));
}

HttpResponse LiveBackend::send(const std::string& body) {
  const std::map<std::string, std::string> headers{{"Authorization", "Bearer " + config_.api_key}};
  InFlightSlot slot(mutex_, slot_free_, in_flight_, config_.max_concurrency);
  return transport_->post_json(path_, body, headers);
}

CompletionResult LiveBackend::complete(const CompletionRequest& request) {
  request.validate();
  if (config_.token_budget && tokens_used() >= *config_.token_budget) {
    throw Error(Errc::budget_exceeded, "token budget of " + std::to_string(*config_.token_budget) + " spent");
  }
  const std::string body = wire_body(request).dump();
  const auto start = std::chrono::steady_clock::now();

  HttpResponse response;
  for (std::size_t attempt = 0;; ++attempt) {
    const bool last = attempt >= config_.retry.max_retries;
    try {
      response = send(body);
    } catch (const Error& e) {
      if (e.code() != Errc::transport || last) throw;
      sleeper_(backoff_delay(attempt));
      continue;
    }
    if (response.status == 401 || response.status == 403) {
      throw Error(Errc::auth, "endpoint rejected the API key (HTTP " + std::to_string(response.status) + ")");
    }
    if (!transient(response.status)) break;
    if (last) {
      const std::string what = "HTTP " + std::to_string(response.status) + " after " + std::to_string(attempt + 1) +
                               " attempts";
      throw Error(response.status == 429 ? Errc::rate_limited : Errc::transport, what);
    }
    sleeper_(backoff_delay(attempt));
  }
  if (response.status < 200 || response.status >= 300) {
    throw Error(Errc::transport, "HTTP " + std::to_string(response.status) + ": " + response.body.substr(0, 200));
  }

  CompletionResult result;
  result.backend = BackendKind::live;
  try {
    const auto json = nlohmann::json::parse(response.body);
    const auto& content = json.at("choices").at(0).at("message").at("content");
    result.text = content.is_null() ? std::string() : content.get<std::string>();
    if (json.contains("usage") && json["usage"].is_object()) {
      const auto& u = json["usage"];
      result.token_usage = TokenUsage{u.value("prompt_tokens", std::size_t{0}), u.value("completion_tokens", std::size_t{0})};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::transport, std::string("malformed completion response: ") + e.what());
  }
  if (result.token_usage) {
    std::lock_guard lock(mutex_);
    tokens_used_ += result.token_usage->prompt + result.token_usage->completion;
  }
  result.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace sgp
