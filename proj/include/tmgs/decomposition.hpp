#pragma once

// Optimal pure-state decomposition at covariance-matrix level:
//   V(w1, w2) = V0 + VC - I/2,
// with V0 the TMSVS and VC the classical partner. The displacement distribution
// of the decomposition is the Gaussian with covariance VC - I/2.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "tmgs/gaussian.hpp"
#include "tmgs/tmsvs.hpp"

namespace tmgs {

inline constexpr std::uint64_t kDefaultLawSeed = 20240917;
inline constexpr int kDefaultLawSamples = 64;

/// What the certificate is allowed to assert about the partner.
enum class CertificateKind {
  Interior,   // entangled: classicality threshold and separability limit
  Boundary,   // separability boundary: partner equals V(w), D~(VC) not asserted independently
  Separable,  // strictly separable: only classicality of the partner
};

std::string_view to_string(CertificateKind kind);

struct DecompositionCertificate {
  CovarianceMatrix v0;
  CovarianceMatrix vc;
  CertificateKind kind = CertificateKind::Interior;
  double classicality_boundary_gap = 0.0;  // lambda_min(VC - I/2)
  double det_gap = 0.0;                    // det(VC - I/2)
  double simon_of_partner = 0.0;           // D~ of VC
  double min_rank3_minor = 0.0;            // smallest 3x3 principal minor of VC - I/2
  double cf_law_max_residual = 0.0;
  std::uint64_t law_seed = kDefaultLawSeed;
  bool passed = false;
  std::string violation;  // empty when passed
};

CovarianceMatrix build_tmsvs_cm(const TmsvsParams& t);

/// VC = V_scaled - V0 + I/2.
CovarianceMatrix build_classical_partner(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0);

/// Smallest eigenvalue of V_scaled - V0, i.e. the classicality margin of the partner.
double partner_classicality_gap(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0);

/// Non-throwing evaluation of every certificate field plus the pass/fail verdict.
DecompositionCertificate assess_certificate(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0,
                                            double tol, CertificateKind kind = CertificateKind::Interior,
                                            std::uint64_t law_seed = kDefaultLawSeed);

/// As assess_certificate, but throws CertificationFailed naming the violated field.
DecompositionCertificate certify(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0, double tol,
                                 CertificateKind kind = CertificateKind::Interior,
                                 std::uint64_t law_seed = kDefaultLawSeed);

/// Largest |log chi_G^(N) - log chi_0^(N) - log chi_C^(N)| over seeded Gaussian
/// sample points lambda in R^4, where log chi^(N)(lambda) = -1/2 lambda^T (V - I/2) lambda.
double verify_multiplication_law(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0,
                                 const CovarianceMatrix& vc, int n_samples = kDefaultLawSamples,
                                 std::uint64_t seed = kDefaultLawSeed);

}  // namespace tmgs
