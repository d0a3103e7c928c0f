#pragma once

#include <stdexcept>
#include <string>

namespace posetnet {

enum class ErrorCode {
  duplicate_label,
  antisymmetry_violation,
  unknown_element,
  size_bound,
  not_path_connected,
  not_comparable,
  not_a_loop,
  not_directed,
  not_certified,
  basepoint_mismatch,
  not_comparable_cycles,
  non_convergence,
  morphism_invalid,
  no_containing_block,
  not_comparable_in_corona,
  input_error,
  usage_error,
  internal_error,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::duplicate_label: return "DuplicateLabel";
    case ErrorCode::antisymmetry_violation: return "AntisymmetryViolation";
    case ErrorCode::unknown_element: return "UnknownElement";
    case ErrorCode::size_bound: return "SizeBound";
    case ErrorCode::not_path_connected: return "NotPathConnected";
    case ErrorCode::not_comparable: return "NotComparable";
    case ErrorCode::not_a_loop: return "NotALoop";
    case ErrorCode::not_directed: return "NotDirected";
    case ErrorCode::not_certified: return "NotCertified";
    case ErrorCode::basepoint_mismatch: return "BasepointMismatch";
    case ErrorCode::not_comparable_cycles: return "NotComparableCycles";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::morphism_invalid: return "MorphismInvalid";
    case ErrorCode::no_containing_block: return "NoContainingBlock";
    case ErrorCode::not_comparable_in_corona: return "NotComparableInCorona";
    case ErrorCode::input_error: return "InputError";
    case ErrorCode::usage_error: return "UsageError";
    case ErrorCode::internal_error: return "InternalError";
  }
  return "Unknown";
}

/// Library-wide exception. Carries a stable code so callers (and tests) can
/// match on the failure kind rather than the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace posetnet
