#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infinikit {

enum class ErrorKind {
  division_by_zero,
  infinite_input,
  precondition,
  no_limit,
  degenerate_input,
  domain,
  certification_failure,
  empty_input,
  dimension_mismatch,
  non_orthogonal,
  eigensolver_failure,
  no_tail,
  insufficient_data,
  not_compact,
  invalid_input,
  syntax,
  mode_mismatch,
  usage,
};

// Machine-readable reason token, printed as the prefix of CLI errors.
constexpr std::string_view token(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::division_by_zero: return "division-by-zero";
    case ErrorKind::infinite_input: return "infinite-input";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::no_limit: return "no-limit";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::domain: return "domain";
    case ErrorKind::certification_failure: return "certification-failure";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::non_orthogonal: return "non-orthogonal";
    case ErrorKind::eigensolver_failure: return "eigensolver-failure";
    case ErrorKind::no_tail: return "no-tail";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::not_compact: return "not-compact";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::mode_mismatch: return "mode-mismatch";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace infinikit
