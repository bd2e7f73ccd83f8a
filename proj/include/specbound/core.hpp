#pragma once

// Shared basics: library version and the error taxonomy. Every failure the
// library raises derives from specbound::Error so callers can map the whole
// family to process exit codes (see tools/specbound_cli.cpp).

#include <stdexcept>
#include <string>

namespace specbound {

inline constexpr const char* version_string = "1.0.0";

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Invalid run configuration: unknown fields, missing keys, malformed files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Mathematically invalid input: negative frequency or time, nonpositive
// temperature parameter, out-of-range special-function argument.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A distributional (delta) spectral component was asked for a pointwise value.
class DeltaNotEvaluable : public DomainError {
 public:
  using DomainError::DomainError;
};

// A certified result could not be driven below the requested tolerance.
class ToleranceNotMet : public Error {
 public:
  using Error::Error;
};

// The integrand-evaluation budget ran out before the tolerance was reached.
class EvalBudgetExceeded : public ToleranceNotMet {
 public:
  using ToleranceNotMet::ToleranceNotMet;
};

// A special-function evaluation could not meet its accuracy contract.
class SpecialFunctionFailure : public Error {
 public:
  using Error::Error;
};

// A computation would overflow and no stable rewrite was available.
class OverflowGuard : public Error {
 public:
  using Error::Error;
};

// A series or integral tail could not be bounded rigorously.
class TailNotCertifiable : public Error {
 public:
  using Error::Error;
};

// A horizon truncation has no decay certificate covering the remainder.
class NoTailCertificate : public TailNotCertifiable {
 public:
  using TailNotCertifiable::TailNotCertifiable;
};

// An integer search (e.g. minimal truncation order) exceeded its cap.
class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace specbound
