#include "tmgs/error.hpp"

namespace tmgs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::Unphysical: return "Unphysical";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::DegenerateBlocks: return "DegenerateBlocks";
    case ErrorCode::InconsistentInvariants: return "InconsistentInvariants";
    case ErrorCode::NonPositiveScaling: return "NonPositiveScaling";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::ConventionViolation: return "ConventionViolation";
    case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoFeasibleRoot: return "NoFeasibleRoot";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotSqueezedThermal: return "NotSqueezedThermal";
    case ErrorCode::NotOnKappaManifold: return "NotOnKappaManifold";
    case ErrorCode::CertificationFailed: return "CertificationFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConventionMismatch: return "ConventionMismatch";
    case ErrorCode::GenerationStalled: return "GenerationStalled";
  }
  return "Unknown";
}

}  // namespace tmgs
