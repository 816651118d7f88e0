#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <thread>

#include "sgp/datasets.hpp"
#include "sgp/error.hpp"
#include "sgp/gateway.hpp"
#include "sgp/textgraph.hpp"

namespace {

using namespace sgp;
namespace fs = std::filesystem;

std::string ok_body(const std::string& text, std::size_t prompt = 10, std::size_t completion = 5) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}},
                        {"usage", {{"prompt_tokens", prompt}, {"completion_tokens", completion}}}}
      .dump();
}

// Replays scripted responses (the last one repeats) and records every call.
class FakeTransport final : public HttpTransport {
 public:
  explicit FakeTransport(std::vector<HttpResponse> script, std::chrono::milliseconds hold = {})
      : script_(script.begin(), script.end()), hold_(hold) {}

  HttpResponse post_json(const std::string& path, const std::string& body,
                         const std::map<std::string, std::string>& headers) override {
    const int now = ++in_flight_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    if (hold_.count() > 0) std::this_thread::sleep_for(hold_);
    HttpResponse r;
    {
      std::lock_guard lock(mutex_);
      paths_.push_back(path);
      bodies_.push_back(body);
      auth_ = headers.at("Authorization");
      r = script_.front();
      if (script_.size() > 1) script_.pop_front();
    }
    --in_flight_;
    if (r.status == 0) throw Error(Errc::transport, "connection refused");
    return r;
  }

  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return paths_.size();
  }

  std::deque<HttpResponse> script_;
  std::chrono::milliseconds hold_;
  mutable std::mutex mutex_;
  std::vector<std::string> paths_;
  std::vector<std::string> bodies_;
  std::string auth_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
};

struct Harness {
  FakeTransport* transport = nullptr;
  std::vector<std::chrono::milliseconds> sleeps;
  std::unique_ptr<LiveBackend> backend;
};

std::unique_ptr<Harness> harness(std::vector<HttpResponse> script, LiveConfig config = {},
                                 std::chrono::milliseconds hold = {}) {
  auto h = std::make_unique<Harness>();
  auto t = std::make_unique<FakeTransport>(std::move(script), hold);
  h->transport = t.get();
  if (config.api_key.empty()) config.api_key = "test-key";
  auto* sleeps = &h->sleeps;
  h->backend = std::make_unique<LiveBackend>(std::move(config), std::move(t),
                                             [sleeps](std::chrono::milliseconds d) { sleeps->push_back(d); });
  return h;
}

CompletionRequest request(const std::string& content = "Who is Seth's cousin?") {
  CompletionRequest r;
  r.messages = {{"user", content}};
  return r;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no sgp::Error thrown";
  return Errc::io;
}

TEST(Request, ValidationBounds) {
  auto r = request();
  EXPECT_NO_THROW(r.validate());
  r.temperature = 2.5;
  EXPECT_EQ(code_of([&] { r.validate(); }), Errc::validation);
  r = request();
  r.max_tokens = 0;
  EXPECT_EQ(code_of([&] { r.validate(); }), Errc::validation);
  r = request();
  r.messages.clear();
  EXPECT_EQ(code_of([&] { r.validate(); }), Errc::validation);
}

TEST(Request, CacheKeyIgnoresMetadata) {
  auto a = request();
  auto b = request();
  b.metadata = {"id-7", "graph_sorting", "sgp"};
  EXPECT_EQ(cache_key(a), cache_key(b));
  EXPECT_EQ(cache_key(a).size(), 64u);
  b.temperature = 0.5;
  EXPECT_NE(cache_key(a), cache_key(b));
  const auto body = wire_body(a);
  EXPECT_EQ(body.at("model"), "gpt-4");
  EXPECT_FALSE(body.contains("metadata"));
}

TEST(Live, ParsesCompletionAndCountsTokens) {
  LiveConfig c;
  c.base_url = "http://localhost:9/v1";
  auto h = harness({{200, ok_body("Seth is Jeremy's cousin.", 12, 8)}}, c);
  const auto r = h->backend->complete(request());
  EXPECT_EQ(r.text, "Seth is Jeremy's cousin.");
  EXPECT_EQ(r.backend, BackendKind::live);
  ASSERT_TRUE(r.token_usage);
  EXPECT_EQ(h->backend->tokens_used(), 20u);
  EXPECT_EQ(h->transport->paths_.front(), "/v1/chat/completions");
  EXPECT_EQ(h->transport->auth_, "Bearer test-key");
  EXPECT_EQ(nlohmann::json::parse(h->transport->bodies_.front()), wire_body(request()));
}

TEST(Live, MissingKeyIsAuthError) {
  EXPECT_EQ(code_of([] { LiveBackend b(LiveConfig{}, std::make_unique<FakeTransport>(std::vector<HttpResponse>{{}})); }),
            Errc::auth);
  EXPECT_EQ(code_of([] {
              LiveConfig c;
              c.api_key = "k";
              c.max_concurrency = 0;
              LiveBackend b(c, std::make_unique<FakeTransport>(std::vector<HttpResponse>{{}}));
            }),
            Errc::config);
}

TEST(Live, UnauthorizedFailsWithoutRetry) {
  auto h = harness({{401, "{}"}});
  EXPECT_EQ(code_of([&] { (void)h->backend->complete(request()); }), Errc::auth);
  EXPECT_EQ(h->transport->calls(), 1u);
  EXPECT_TRUE(h->sleeps.empty());
}

TEST(Live, RateLimitRetriesThenGivesUp) {
  LiveConfig c;
  c.retry = {.max_retries = 3, .base_delay = std::chrono::milliseconds(100), .factor = 2.0, .jitter = 0.0};
  auto h = harness({{429, "{}"}}, c);
  EXPECT_EQ(code_of([&] { (void)h->backend->complete(request()); }), Errc::rate_limited);
  EXPECT_EQ(h->transport->calls(), 4u);
  EXPECT_EQ(h->sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100),
                                                                 std::chrono::milliseconds(200),
                                                                 std::chrono::milliseconds(400)}));
}

TEST(Live, TransientFailuresRecover) {
  auto h = harness({{503, ""}, {0, ""}, {200, ok_body("fine")}});
  EXPECT_EQ(h->backend->complete(request()).text, "fine");
  EXPECT_EQ(h->transport->calls(), 3u);
  EXPECT_EQ(h->sleeps.size(), 2u);
}

TEST(Live, ServerErrorsExhaustAsTransport) {
  LiveConfig c;
  c.retry.max_retries = 1;
  auto h = harness({{500, ""}}, c);
  EXPECT_EQ(code_of([&] { (void)h->backend->complete(request()); }), Errc::transport);
  EXPECT_EQ(h->transport->calls(), 2u);
}

TEST(Live, ClientErrorsAndMalformedBodies) {
  auto bad_request = harness({{400, "{\"error\": \"bad\"}"}});
  EXPECT_EQ(code_of([&] { (void)bad_request->backend->complete(request()); }), Errc::transport);
  EXPECT_EQ(bad_request->transport->calls(), 1u);
  auto malformed = harness({{200, "{\"choices\": []}"}});
  EXPECT_EQ(code_of([&] { (void)malformed->backend->complete(request()); }), Errc::transport);
}

TEST(Live, JitterStaysWithinBounds) {
  LiveConfig c;
  c.retry = {.max_retries = 4, .base_delay = std::chrono::milliseconds(1000), .factor = 2.0, .jitter = 0.2};
  auto h = harness({{200, ok_body("x")}}, c);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto d = h->backend->backoff_delay(k).count();
    const double nominal = 1000.0 * static_cast<double>(1u << k);
    EXPECT_GE(d, static_cast<long long>(nominal * 0.8) - 1);
    EXPECT_LE(d, static_cast<long long>(nominal * 1.2) + 1);
  }
}

TEST(Live, ConcurrencyIsBounded) {
  LiveConfig c;
  c.max_concurrency = 2;
  auto h = harness({{200, ok_body("x")}}, c, std::chrono::milliseconds(20));
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&] { (void)h->backend->complete(request()); });
  for (auto& t : threads) t.join();
  EXPECT_EQ(h->transport->calls(), 8u);
  EXPECT_LE(h->transport->peak_.load(), 2);
  EXPECT_GE(h->transport->peak_.load(), 1);
}

TEST(Live, TokenBudgetStopsFurtherCalls) {
  LiveConfig c;
  c.token_budget = 20;
  auto h = harness({{200, ok_body("x", 10, 10)}}, c);
  (void)h->backend->complete(request());
  EXPECT_EQ(code_of([&] { (void)h->backend->complete(request()); }), Errc::budget_exceeded);
  EXPECT_EQ(h->transport->calls(), 1u);
}

TEST(Live, ApiKeyComesFromEnvironment) {
  ::setenv("SGP_API_KEY", "from-env", 1);
  EXPECT_EQ(api_key_from_env(), "from-env");
  ::unsetenv("SGP_API_KEY");
  EXPECT_EQ(api_key_from_env(), "");
}

class Counting final : public Backend {
 public:
  CompletionResult complete(const CompletionRequest& r) override {
    ++calls;
    if (r.messages.front().content == "fail") throw Error(Errc::transport, "down");
    return {"echo: " + r.messages.front().content, BackendKind::live, 1.0, std::nullopt};
  }
  std::atomic<int> calls{0};
};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sgp-cache-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

TEST(Cache, HitSkipsInnerBackend) {
  TempDir dir;
  auto inner = std::make_shared<Counting>();
  CacheBackend cache(dir.path, inner);
  const auto first = cache.complete(request("hello"));
  const auto second = cache.complete(request("hello"));
  EXPECT_EQ(inner->calls.load(), 1);
  EXPECT_EQ(first.text, second.text);
  EXPECT_EQ(second.backend, BackendKind::cache);
  EXPECT_EQ(cache.hits(), 1u);
  EXPECT_EQ(cache.misses(), 1u);
  EXPECT_TRUE(fs::exists(cache.entry_path(request("hello"))));
  EXPECT_EQ(cache.lookup(request("hello")), "echo: hello");

  const auto record = nlohmann::json::parse(read_file(cache.entry_path(request("hello"))));
  EXPECT_TRUE(record.contains("request"));
  EXPECT_TRUE(record.contains("response"));
  EXPECT_TRUE(record.contains("timestamp"));
}

TEST(Cache, FailuresAreNotStored) {
  TempDir dir;
  auto inner = std::make_shared<Counting>();
  CacheBackend cache(dir.path, inner);
  EXPECT_EQ(code_of([&] { (void)cache.complete(request("fail")); }), Errc::transport);
  EXPECT_FALSE(cache.lookup(request("fail")));
  EXPECT_EQ(cache_stats(dir.path).entries, 0u);
}

TEST(Cache, MissWithoutInnerIsTransport) {
  TempDir dir;
  CacheBackend cache(dir.path, nullptr);
  EXPECT_EQ(code_of([&] { (void)cache.complete(request()); }), Errc::transport);
}

TEST(Cache, StatsAndClear) {
  TempDir dir;
  CacheBackend cache(dir.path, std::make_shared<Counting>());
  (void)cache.complete(request("a"));
  (void)cache.complete(request("b"));
  const auto stats = cache_stats(dir.path);
  EXPECT_EQ(stats.entries, 2u);
  EXPECT_GT(stats.bytes, 0u);
  EXPECT_EQ(cache_clear(dir.path), 2u);
  EXPECT_EQ(cache_stats(dir.path).entries, 0u);
}

Dataset clutrr() { return load_dataset(fs::path(SGP_SOURCE_DIR) / "fixtures" / "clutrr"); }

TEST(Mock, TranscriptStatesTheSolution) {
  const auto ds = clutrr();
  for (const auto& inst : ds.instances) {
    const auto r = mock_complete(inst);
    EXPECT_EQ(r.backend, BackendKind::mock);
    const auto stated = extract_final_answer(r.text, AnswerKind::relation);
    EXPECT_TRUE(answers_equivalent(stated.value, ds.aliases.canonical(inst.gold.value), AnswerKind::relation))
        << inst.id << ": " << stated.value << " vs " << inst.gold.value;
  }
}

TEST(Mock, FaultCorruptsOnlyTheConclusion) {
  const auto ds = clutrr();
  const MockConfig faulty{FaultMode::corrupt_conclusion, 1.0};
  for (const auto& inst : ds.instances) {
    const auto clean = mock_complete(inst);
    const auto bad = mock_complete(inst, faulty);
    EXPECT_EQ(extract_triples(clean.text).all().size(), extract_triples(bad.text).all().size()) << inst.id;
    const auto stated = extract_final_answer(bad.text, AnswerKind::relation);
    EXPECT_FALSE(answers_equivalent(stated.value, ds.aliases.canonical(inst.gold.value), AnswerKind::relation))
        << inst.id;
  }
}

TEST(Mock, FaultSelectionIsStableAndProportional) {
  std::size_t hit = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto id = "inst-" + std::to_string(i);
    EXPECT_EQ(fault_selected(id, 0.3), fault_selected(id, 0.3));
    hit += fault_selected(id, 0.3) ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(hit) / 2000.0, 0.3, 0.05);
  EXPECT_FALSE(fault_selected("x", 0.0));
  EXPECT_TRUE(fault_selected("x", 1.0));
  EXPECT_EQ(parse_fault_mode(to_string(FaultMode::corrupt_conclusion)), FaultMode::corrupt_conclusion);
}

TEST(Mock, BackendLooksUpByInstanceId) {
  const auto ds = clutrr();
  MockBackend backend(ds.instances);
  auto r = request();
  r.metadata.instance_id = ds.instances.front().id;
  EXPECT_EQ(backend.complete(r).text, mock_complete(ds.instances.front()).text);
  r.metadata.instance_id = "no-such-id";
  EXPECT_THROW((void)backend.complete(r), Error);
}

}  // namespace
