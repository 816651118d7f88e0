#include "sgp/error.hpp"

namespace sgp {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::validation: return "ValidationError";
    case Errc::entity_not_found: return "EntityNotFound";
    case Errc::no_path: return "NoPath";
    case Errc::invalid_event: return "InvalidEvent";
    case Errc::undefined_composition: return "Undefined";
    case Errc::unanswerable: return "Unanswerable";
    case Errc::ambiguous: return "Ambiguous";
    case Errc::inconsistent: return "Inconsistent";
    case Errc::underdetermined: return "Underdetermined";
    case Errc::missing_attribute: return "MissingAttribute";
    case Errc::unprovable: return "Unprovable";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::no_answer_found: return "NoAnswerFound";
    case Errc::unknown_task: return "UnknownTask";
    case Errc::unknown_mode: return "UnknownMode";
    case Errc::unsupported_task: return "UnsupportedTask";
    case Errc::auth: return "AuthError";
    case Errc::rate_limited: return "RateLimited";
    case Errc::transport: return "TransportError";
    case Errc::missing_column: return "MissingColumn";
    case Errc::unparseable_row: return "UnparseableRow";
    case Errc::unknown_subtask: return "UnknownSubtask";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::mixed_tasks: return "MixedTasks";
    case Errc::incompatible_kinds: return "IncompatibleKinds";
    case Errc::config: return "ConfigError";
    case Errc::all_instances_failed: return "AllInstancesFailed";
    case Errc::io: return "IoError";
  }
  return "Error";
}

Error::Error(Errc code, const std::string& message, std::vector<std::string> details)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      details_(std::move(details)) {}

}  // namespace sgp
