#include "tmgs/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmgs/error.hpp"

namespace tmgs {

namespace {

// Clamp used for the double-root case Delta^2 = 4 det V (pure states).
constexpr double kDiscriminantClamp = 1e-12;

// (nu_+^2 - nu_-^2)^2 as tr(N^2), N the traceless part of (Omega V)^2. Equal to
// Delta^2 - 4 det V but free of its cancellation near pure states.
double spectral_gap_sq(const Matrix4& v) {
  const Matrix4 w = symplectic_form() * v;
  Matrix4 n = w * w;
  n -= 0.25 * n.trace() * Matrix4::Identity();
  return (n * n).trace();
}

SymplecticSpectrum spectrum_from_invariants(double delta, double det_v, double disc, double tol) {
  const double scale = std::max(1.0, delta * delta);
  if (disc < 0.0) {
    if (disc < -std::max(tol, kDiscriminantClamp) * scale) {
      throw Error(ErrorCode::ComplexSpectrum,
                  "symplectic spectrum is complex: Delta^2 - 4 det V = " + std::to_string(disc),
                  disc);
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double nu_plus_sq = 0.5 * (delta + root);
  if (det_v < 0.0) {
    throw Error(ErrorCode::ComplexSpectrum, "symplectic spectrum is not real: det V < 0", det_v);
  }
  // Subtract when the two roots are close; otherwise nu_-^2 nu_+^2 = det V
  // avoids cancellation in a small nu_-.
  const double nu_minus_sq = root < 0.5 * delta ? 0.5 * (delta - root) : det_v / nu_plus_sq;
  return {std::sqrt(nu_minus_sq), std::sqrt(nu_plus_sq)};
}

double max_abs(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

Matrix4 symplectic_form() {
  Matrix4 omega = Matrix4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

CovarianceMatrix::CovarianceMatrix() : m_(kVacuumVariance * Matrix4::Identity()) {}

CovarianceMatrix CovarianceMatrix::from_row_major(std::span<const double> entries) {
  if (entries.size() != 16) {
    throw Error(ErrorCode::ParseError,
                "covariance matrix needs 16 entries, got " + std::to_string(entries.size()));
  }
  Matrix4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = entries[static_cast<std::size_t>(4 * r + c)];
  }
  return CovarianceMatrix(m);
}

std::array<double, 16> CovarianceMatrix::row_major() const {
  std::array<double, 16> out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[static_cast<std::size_t>(4 * r + c)] = m_(r, c);
  }
  return out;
}

BlockInvariants block_invariants(const CovarianceMatrix& v) {
  return {v.block_a().determinant(), v.block_b().determinant(), v.block_c().determinant(),
          v.matrix().determinant()};
}

PhysicalityVerdict assess_physicality(const CovarianceMatrix& v, double tol) {
  PhysicalityVerdict out;
  const Matrix4& m = v.matrix();
  const double scale = std::max(1.0, max_abs(m));

  const double asym = max_abs(m - m.transpose());
  if (!m.allFinite() || asym > tol * scale) {
    out.status = Physicality::NonSymmetric;
    out.margin = asym;
    return out;
  }

  const Matrix4 sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix4> es(sym, Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues()(0);
  if (lambda_min <= 0.0) {
    out.status = Physicality::NotPositiveDefinite;
    out.margin = lambda_min;
    return out;
  }

  const CovarianceMatrix symmetric(sym);
  const BlockInvariants inv = block_invariants(symmetric);
  out.robertson = inv.det_v - 0.25 * inv.delta() + 1.0 / 16.0;
  try {
    const SymplecticSpectrum s = symplectic_spectrum(symmetric, tol);
    out.nu_minus = s.nu_minus;
    out.nu_plus = s.nu_plus;
  } catch (const Error& e) {
    out.status = Physicality::Unphysical;
    out.margin = e.margin();
    return out;
  }
  out.margin = out.nu_minus - kVacuumVariance;
  if (out.nu_minus < kVacuumVariance - tol) out.status = Physicality::Unphysical;
  return out;
}

PhysicalityVerdict validate_physical(const CovarianceMatrix& v, double tol) {
  PhysicalityVerdict verdict = assess_physicality(v, tol);
  switch (verdict.status) {
    case Physicality::Physical:
      return verdict;
    case Physicality::NonSymmetric:
      throw Error(ErrorCode::NonSymmetric,
                  "covariance matrix is not symmetric (max asymmetry " +
                      std::to_string(verdict.margin) + ")",
                  verdict.margin);
    case Physicality::NotPositiveDefinite:
      throw Error(ErrorCode::NotPositiveDefinite,
                  "covariance matrix is not positive definite (smallest eigenvalue " +
                      std::to_string(verdict.margin) + ")",
                  verdict.margin);
    case Physicality::Unphysical:
      break;
  }
  throw Error(ErrorCode::Unphysical,
              "covariance matrix violates the uncertainty principle (nu_minus - 1/2 = " +
                  std::to_string(verdict.margin) + ")",
              verdict.margin);
}

SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& v, double tol) {
  const BlockInvariants inv = block_invariants(v);
  return spectrum_from_invariants(inv.delta(), inv.det_v, spectral_gap_sq(v.matrix()), tol);
}

SymplecticSpectrum ppt_spectrum(const CovarianceMatrix& v, double tol) {
  const BlockInvariants inv = block_invariants(v);
  Matrix4 flip = Matrix4::Identity();
  flip(3, 3) = -1.0;
  return spectrum_from_invariants(inv.delta_tilde(), inv.det_v, spectral_gap_sq(flip * v.matrix() * flip), tol);
}

double robertson_discriminant(const CovarianceMatrix& v) {
  const BlockInvariants inv = block_invariants(v);
  return inv.det_v - 0.25 * inv.delta() + 1.0 / 16.0;
}

double simon_discriminant(const StandardFormParams& sf) { return sf.simon(); }

double simon_discriminant(const CovarianceMatrix& v) {
  const BlockInvariants inv = block_invariants(v);
  return inv.det_v - 0.25 * inv.delta_tilde() + 1.0 / 16.0;
}

namespace {

SeparabilityVerdict make_verdict(double simon, double kappa, double tol) {
  SeparabilityVerdict out;
  out.simon = simon;
  out.kappa_tilde_minus = kappa;
  if (simon < -tol) {
    out.verdict = Separability::Entangled;
  } else if (simon <= tol) {
    out.verdict = Separability::Boundary;
  } else {
    out.verdict = Separability::Separable;
  }
  return out;
}

}  // namespace

SeparabilityVerdict classify_separability(const CovarianceMatrix& v, double tol) {
  validate_physical(v, tol);
  return make_verdict(simon_discriminant(v), ppt_spectrum(v, tol).nu_minus, tol);
}

SeparabilityVerdict classify_separability(const StandardFormParams& sf, double tol) {
  return classify_separability(build_scaled_cm(sf), tol);
}

ClassicalityMargin classicality_margin(const CovarianceMatrix& v) {
  const Matrix4 shifted = v.matrix() - kVacuumVariance * Matrix4::Identity();
  Eigen::SelfAdjointEigenSolver<Matrix4> es(shifted, Eigen::EigenvaluesOnly);
  ClassicalityMargin out;
  out.margin = es.eigenvalues()(0);
  out.leading_minors[0] = shifted(0, 0);
  out.leading_minors[1] = shifted.topLeftCorner<2, 2>().determinant();
  out.leading_minors[2] = shifted.topLeftCorner<3, 3>().determinant();
  out.leading_minors[3] = shifted.determinant();
  return out;
}

StandardFormParams reduce_to_standard_form(const CovarianceMatrix& v, double tol) {
  const BlockInvariants inv = block_invariants(v);
  if (inv.det_a <= 0.0 || inv.det_b <= 0.0) {
    throw Error(ErrorCode::DegenerateBlocks, "local blocks have non-positive determinant",
                std::min(inv.det_a, inv.det_b));
  }
  const double b1 = std::sqrt(inv.det_a);
  const double b2 = std::sqrt(inv.det_b);
  const double bb = b1 * b2;
  if (bb < tol) {
    throw Error(ErrorCode::DegenerateBlocks, "local blocks are degenerate", bb);
  }

  // c^2 and d^2 are the roots of w^2 - S w + m^2 with m = det C.
  const double m = inv.det_c;
  const double sum = (bb * bb + m * m - inv.det_v) / bb;
  const double disc = std::max(0.0, sum * sum - 4.0 * m * m);
  const double root = std::sqrt(disc);
  const double w_plus = 0.5 * (sum + root);
  const double w_minus = w_plus > 0.0 ? (m * m) / w_plus : 0.0;

  StandardFormParams sf;
  sf.b1 = b1;
  sf.b2 = b2;
  sf.c = std::sqrt(std::max(0.0, w_plus));
  const double abs_d = std::sqrt(std::max(0.0, w_minus));
  const double scale = std::max(1.0, bb);
  if (std::abs(m) <= tol * scale) {
    sf.d = 0.0;
  } else {
    sf.d = m > 0.0 ? abs_d : -abs_d;
  }

  const double det_dev = std::abs(sf.det_v() - inv.det_v);
  const double delta_dev = std::abs(sf.delta() - inv.delta());
  const double inv_tol = std::max(tol, 1e-12) * scale * scale;
  if (det_dev > inv_tol || delta_dev > std::max(tol, 1e-12) * scale) {
    throw Error(ErrorCode::InconsistentInvariants,
                "standard form does not reproduce det V and Delta",
                std::max(det_dev, delta_dev));
  }
  return sf;
}

CovarianceMatrix build_scaled_cm(const StandardFormParams& sf, ScalingFactors u) {
  if (!(u.u1 > 0.0) || !(u.u2 > 0.0) || !std::isfinite(u.u1) || !std::isfinite(u.u2)) {
    throw Error(ErrorCode::NonPositiveScaling, "scaling factors must be finite and positive",
                std::min(u.u1, u.u2));
  }
  const double root_p = std::sqrt(u.u1 * u.u2);
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = sf.b1 * u.u1;
  m(1, 1) = sf.b1 / u.u1;
  m(2, 2) = sf.b2 * u.u2;
  m(3, 3) = sf.b2 / u.u2;
  m(0, 2) = m(2, 0) = sf.c * root_p;
  m(1, 3) = m(3, 1) = sf.d / root_p;
  return CovarianceMatrix(m);
}

Matrix4 local_symplectic(double theta1, double r1, double theta2, double r2) {
  auto one_mode = [](double theta, double r) {
    Matrix2 rot;
    rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    Matrix2 squeeze = Matrix2::Zero();
    squeeze(0, 0) = std::exp(-r);
    squeeze(1, 1) = std::exp(r);
    return Matrix2(squeeze * rot);
  };
  Matrix4 s = Matrix4::Zero();
  s.block<2, 2>(0, 0) = one_mode(theta1, r1);
  s.block<2, 2>(2, 2) = one_mode(theta2, r2);
  return s;
}

CovarianceMatrix congruence(const CovarianceMatrix& v, const Matrix4& s) {
  return CovarianceMatrix(s * v.matrix() * s.transpose());
}

}  // namespace tmgs
