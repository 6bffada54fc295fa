#include "tmgs/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tmgs/error.hpp"

namespace tmgs {

namespace {

Matrix4 half_identity() { return kVacuumVariance * Matrix4::Identity(); }

double log_cf(const Matrix4& m, const Eigen::Vector4d& lambda) {
  return -0.5 * lambda.dot((m - half_identity()) * lambda);
}

double smallest_rank3_minor(const Matrix4& m) {
  double out = 0.0;
  bool first = true;
  for (int skip = 0; skip < 4; ++skip) {
    Eigen::Matrix3d sub;
    int r = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == skip) continue;
      int c = 0;
      for (int j = 0; j < 4; ++j) {
        if (j == skip) continue;
        sub(r, c++) = m(i, j);
      }
      ++r;
    }
    const double det = sub.determinant();
    out = first ? det : std::min(out, det);
    first = false;
  }
  return out;
}

}  // namespace

std::string_view to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Interior:
      return "interior";
    case CertificateKind::Boundary:
      return "boundary";
    case CertificateKind::Separable:
      return "separable";
  }
  return "unknown";
}

CovarianceMatrix build_tmsvs_cm(const TmsvsParams& t) {
  Matrix4 m = Matrix4::Zero();
  m.diagonal().setConstant(t.x());
  m(0, 2) = m(2, 0) = t.y();
  m(1, 3) = m(3, 1) = -t.y();
  return CovarianceMatrix(m);
}

CovarianceMatrix build_classical_partner(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0) {
  return CovarianceMatrix(Matrix4(v_scaled.matrix() - v0.matrix() + half_identity()));
}

double partner_classicality_gap(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0) {
  const Matrix4 diff = v_scaled.matrix() - v0.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix4> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

DecompositionCertificate assess_certificate(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0,
                                            double tol, CertificateKind kind, std::uint64_t law_seed) {
  DecompositionCertificate cert;
  cert.v0 = v0;
  cert.vc = build_classical_partner(v_scaled, v0);
  cert.kind = kind;
  cert.law_seed = law_seed;

  const Matrix4 shifted = cert.vc.matrix() - half_identity();
  cert.classicality_boundary_gap = classicality_margin(cert.vc).margin;
  cert.det_gap = shifted.determinant();
  cert.simon_of_partner = simon_discriminant(cert.vc);
  cert.min_rank3_minor = smallest_rank3_minor(shifted);
  cert.cf_law_max_residual = verify_multiplication_law(v_scaled, v0, cert.vc, kDefaultLawSamples, law_seed);

  if (kind != CertificateKind::Separable && std::abs(cert.det_gap) > tol) {
    cert.violation = "det_gap";
  } else if (cert.classicality_boundary_gap < -tol) {
    cert.violation = "classicality_boundary_gap";
  } else if (kind == CertificateKind::Interior && std::abs(cert.simon_of_partner) > tol) {
    cert.violation = "simon_of_partner";
  } else if (cert.min_rank3_minor < -tol) {
    cert.violation = "min_rank3_minor";
  }
  cert.passed = cert.violation.empty();
  return cert;
}

DecompositionCertificate certify(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0, double tol,
                                 CertificateKind kind, std::uint64_t law_seed) {
  DecompositionCertificate cert = assess_certificate(v_scaled, v0, tol, kind, law_seed);
  if (cert.passed) return cert;
  double margin = 0.0;
  if (cert.violation == "det_gap") {
    margin = cert.det_gap;
  } else if (cert.violation == "classicality_boundary_gap") {
    margin = cert.classicality_boundary_gap;
  } else if (cert.violation == "simon_of_partner") {
    margin = cert.simon_of_partner;
  } else {
    margin = cert.min_rank3_minor;
  }
  throw Error(ErrorCode::CertificationFailed, "decomposition certificate failed on " + cert.violation, margin);
}

double verify_multiplication_law(const CovarianceMatrix& v_scaled, const CovarianceMatrix& v0,
                                 const CovarianceMatrix& vc, int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Eigen::Vector4d lambda;
    for (int i = 0; i < 4; ++i) lambda(i) = normal(rng);
    const double lhs = log_cf(v_scaled.matrix(), lambda);
    const double rhs = log_cf(v0.matrix(), lambda) + log_cf(vc.matrix(), lambda);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace tmgs
