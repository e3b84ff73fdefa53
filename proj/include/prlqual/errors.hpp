#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prlqual {

// Stable error codes. The CLI maps these onto exit codes, so additions are
// fine but renames are breaking.
enum class ErrorCode {
  malformed_document,
  missing_field,
  invalid_value,
  unknown_field,
  io_failure,
  validation_required,
  duplicate_batch_id,
  invalid_batch,
  non_monotone_thresholds,
  weight_sum_violation,
  missing_level,
  lock_held,
  chain_corrupt,
  invalid_sweep,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_document: return "MalformedDocument";
    case ErrorCode::missing_field: return "MissingField";
    case ErrorCode::invalid_value: return "InvalidValue";
    case ErrorCode::unknown_field: return "UnknownField";
    case ErrorCode::io_failure: return "IoFailure";
    case ErrorCode::validation_required: return "ValidationRequired";
    case ErrorCode::duplicate_batch_id: return "DuplicateBatchId";
    case ErrorCode::invalid_batch: return "InvalidBatch";
    case ErrorCode::non_monotone_thresholds: return "NonMonotoneThresholds";
    case ErrorCode::weight_sum_violation: return "WeightSumViolation";
    case ErrorCode::missing_level: return "MissingLevel";
    case ErrorCode::lock_held: return "LockHeld";
    case ErrorCode::chain_corrupt: return "ChainCorrupt";
    case ErrorCode::invalid_sweep: return "InvalidSweep";
  }
  return "Unknown";
}

// `subject` names the offending field, path, or value so callers can report
// precisely what was rejected.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) +
                           (subject.empty() ? "" : " (" + subject + ")") + ": " + message),
        code_(code),
        subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

enum class Severity { error, warning };

inline const char* severity_name(Severity s) {
  return s == Severity::error ? "error" : "warning";
}

// One validation or integrity observation. `code` is a stable machine-readable
// identifier; `subject` is the offending path or field.
struct Finding {
  Severity severity = Severity::error;
  std::string code;
  std::string subject;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

inline std::size_t count_errors(const std::vector<Finding>& findings) {
  std::size_t n = 0;
  for (const auto& f : findings)
    if (f.severity == Severity::error) ++n;
  return n;
}

inline std::size_t count_warnings(const std::vector<Finding>& findings) {
  std::size_t n = 0;
  for (const auto& f : findings)
    if (f.severity == Severity::warning) ++n;
  return n;
}

}  // namespace prlqual
