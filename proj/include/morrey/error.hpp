#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace morrey {

enum class ErrorCode {
  invalid_range,
  invalid_count,
  misaligned_function,
  degenerate_input,
  unknown_family,
  invalid_params,
  empty_radii,
  index_out_of_range,
  out_of_domain,
  table_too_coarse,
  unsupported_variant,
  weight_singular_at_node,
  non_integrable_input,
  evaluation_at_endpoint,
  degenerate_curve,
  class_mismatch,
  precondition,
  parse_error,
  validation_error,
  io_error,
  empty_report_list,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_range: return "invalid-range";
    case ErrorCode::invalid_count: return "invalid-count";
    case ErrorCode::misaligned_function: return "misaligned-function";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::unknown_family: return "unknown-family";
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::empty_radii: return "empty-radii";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::out_of_domain: return "out-of-domain";
    case ErrorCode::table_too_coarse: return "table-too-coarse";
    case ErrorCode::unsupported_variant: return "unsupported-variant";
    case ErrorCode::weight_singular_at_node: return "weight-singular-at-node";
    case ErrorCode::non_integrable_input: return "non-integrable-input";
    case ErrorCode::evaluation_at_endpoint: return "evaluation-at-endpoint";
    case ErrorCode::degenerate_curve: return "degenerate-curve";
    case ErrorCode::class_mismatch: return "class-mismatch";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::validation_error: return "validation-error";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::empty_report_list: return "empty-report-list";
  }
  return "unknown";
}

/// Every failure in the library is reported through this exception; `code()`
/// carries the machine-readable kind, `what()` the human-readable context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace morrey
