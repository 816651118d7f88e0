#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sgp {

/// Every failure the library reports is an sgp::Error tagged with one of
/// these codes. Callers branch on code(); the message is for humans.
enum class Errc {
  validation,
  entity_not_found,
  no_path,
  invalid_event,
  undefined_composition,
  unanswerable,
  ambiguous,
  inconsistent,
  underdetermined,
  missing_attribute,
  unprovable,
  budget_exceeded,
  no_answer_found,
  unknown_task,
  unknown_mode,
  unsupported_task,
  auth,
  rate_limited,
  transport,
  missing_column,
  unparseable_row,
  unknown_subtask,
  schema_mismatch,
  mixed_tasks,
  incompatible_kinds,
  config,
  all_instances_failed,
  io,
};

/// Stable CamelCase name ("NoPath", "AuthError", ...) used in reports and
/// CLI messages.
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::vector<std::string> details = {});

  [[nodiscard]] Errc code() const noexcept { return code_; }

  /// Structured payload: candidate entities for Ambiguous, candidate orders
  /// for Underdetermined, (subject, attribute) for MissingAttribute, and so on.
  [[nodiscard]] const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  Errc code_;
  std::vector<std::string> details_;
};

}  // namespace sgp
