#pragma once

#include <stdexcept>
#include <string>

namespace swh {

/// Failure modes of the numerical operations. Each value maps 1:1 onto the
/// machine-readable error code emitted by the CLI (exit code 3).
enum class errc {
  non_monotone,
  no_interior_critical_point,
  multiple_maxima,
  plateau,
  no_sign_change,
  degenerate_hessian,
  flat_second_derivative,
  incompatible,
  singular_system,
  zero_denominator,
  truncation,
  low_acceptance,
  numerical_blowup,
};

const char* errc_name(errc c);

/// Numerical failure with a stable code. CLI maps these to exit code 3.
class NumericsError : public std::runtime_error {
 public:
  NumericsError(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  errc code_;
};

/// Bad user input (flags, config files, parameter ranges). CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_monotone: return "NonMonotone";
    case errc::no_interior_critical_point: return "NoInteriorCriticalPoint";
    case errc::multiple_maxima: return "MultipleMaxima";
    case errc::plateau: return "Plateau";
    case errc::no_sign_change: return "NoSignChange";
    case errc::degenerate_hessian: return "DegenerateHessian";
    case errc::flat_second_derivative: return "FlatSecondDerivative";
    case errc::incompatible: return "Incompatible";
    case errc::singular_system: return "SingularSystem";
    case errc::zero_denominator: return "ZeroDenominator";
    case errc::truncation: return "Truncation";
    case errc::low_acceptance: return "LowAcceptance";
    case errc::numerical_blowup: return "NumericalBlowup";
  }
  return "Unknown";
}

}  // namespace swh
