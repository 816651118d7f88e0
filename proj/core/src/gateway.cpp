#include "sgp/gateway.hpp"

#include <cstdlib>

#include "sgp/digest.hpp"
#include "sgp/error.hpp"

namespace sgp {

std::string_view to_string(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::live: return "live";
    case BackendKind::mock: return "mock";
    case BackendKind::cache: return "cache";
  }
  return "?";
}

void CompletionRequest::validate() const {
  if (messages.empty()) throw Error(Errc::validation, "request has no messages");
  if (!(temperature >= 0.0 && temperature <= 2.0)) throw Error(Errc::validation, "temperature must lie in [0, 2]");
  if (max_tokens <= 0) throw Error(Errc::validation, "max_tokens must be positive");
  if (model.empty()) throw Error(Errc::validation, "model must be named");
}

nlohmann::json wire_body(const CompletionRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  return {{"model", request.model},
          {"messages", std::move(messages)},
          {"temperature", request.temperature},
          {"max_tokens", request.max_tokens}};
}

std::string cache_key(const CompletionRequest& request) { return sha256_hex(wire_body(request).dump()); }

std::string api_key_from_env() {
  const char* key = std::getenv("SGP_API_KEY");
  return key ? std::string(key) : std::string();
}

}  // namespace sgp
