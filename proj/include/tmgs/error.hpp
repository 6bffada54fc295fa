#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tmgs {

enum class ErrorCode {
  // covariance matrices
  NonSymmetric,
  NotPositiveDefinite,
  Unphysical,
  ComplexSpectrum,
  DegenerateBlocks,
  InconsistentInvariants,
  NonPositiveScaling,
  // polynomials
  ZeroPolynomial,
  DegreeTooHigh,
  NegativeDiscriminant,
  // solver
  ConventionViolation,
  NoPositiveRoot,
  ResidualTooLarge,
  DomainError,
  NoFeasibleRoot,
  NotSymmetric,
  NotSqueezedThermal,
  NotOnKappaManifold,
  // decomposition
  CertificationFailed,
  // input
  ParseError,
  ConventionMismatch,
  GenerationStalled,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code and, where one exists,
// the numeric margin by which the offending condition was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double margin = 0.0)
      : std::runtime_error(what), code_(code), margin_(margin) {}

  ErrorCode code() const noexcept { return code_; }
  double margin() const noexcept { return margin_; }

 private:
  ErrorCode code_;
  double margin_;
};

}  // namespace tmgs
