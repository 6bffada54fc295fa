#pragma once

// Covariance-matrix algebra for two-mode Gaussian states.
//
// Conventions used throughout the library:
//   * quadrature ordering (q1, p1, q2, p2);
//   * vacuum variance 1/2, so a matrix V is physical iff V + (i/2) Omega >= 0;
//   * standard form (b1, b2, c, d) with c >= |d| and d carrying the sign of det C.

#include <array>
#include <span>

#include <Eigen/Dense>

namespace tmgs {

inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kDefaultTol = 1e-10;

using Matrix4 = Eigen::Matrix4d;
using Matrix2 = Eigen::Matrix2d;

/// Omega = i(sigma_2 (+) sigma_2) written as a real antisymmetric 4x4 matrix.
Matrix4 symplectic_form();

class CovarianceMatrix {
 public:
  CovarianceMatrix();  // vacuum
  explicit CovarianceMatrix(const Matrix4& m) : m_(m) {}

  /// Builds from 16 reals in row-major order. Throws ParseError on a size mismatch.
  static CovarianceMatrix from_row_major(std::span<const double> entries);
  static CovarianceMatrix vacuum() { return CovarianceMatrix(); }

  const Matrix4& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }
  std::array<double, 16> row_major() const;

  Matrix2 block_a() const { return m_.block<2, 2>(0, 0); }
  Matrix2 block_b() const { return m_.block<2, 2>(2, 2); }
  Matrix2 block_c() const { return m_.block<2, 2>(0, 2); }

 private:
  Matrix4 m_;
};

/// det A, det B, det C and det V of the 2x2 block partition [[A, C], [C^T, B]].
struct BlockInvariants {
  double det_a = 0.0;
  double det_b = 0.0;
  double det_c = 0.0;
  double det_v = 0.0;

  double delta() const { return det_a + det_b + 2.0 * det_c; }
  double delta_tilde() const { return det_a + det_b - 2.0 * det_c; }
};

BlockInvariants block_invariants(const CovarianceMatrix& v);

/// Local symplectic invariants of a two-mode state. Derived invariants are
/// computed on demand so they can never disagree with (b1, b2, c, d).
struct StandardFormParams {
  double b1 = kVacuumVariance;
  double b2 = kVacuumVariance;
  double c = 0.0;
  double d = 0.0;

  double det_v() const { return (b1 * b2 - c * c) * (b1 * b2 - d * d); }
  /// Seralian b1^2 + b2^2 + 2cd. Doubles as the symplectic invariant Z.
  double delta() const { return b1 * b1 + b2 * b2 + 2.0 * c * d; }
  double z() const { return delta(); }
  double delta_tilde() const { return b1 * b1 + b2 * b2 - 2.0 * c * d; }
  /// det(V + i Omega / 2); non-negative for physical states.
  double robertson() const { return det_v() - 0.25 * delta() + 1.0 / 16.0; }
  /// det(V~ + i Omega / 2) of the partial transpose; negative iff entangled.
  double simon() const { return det_v() - 0.25 * delta_tilde() + 1.0 / 16.0; }
};

struct ScalingFactors {
  double u1 = 1.0;
  double u2 = 1.0;

  double product() const { return u1 * u2; }
};

struct SymplecticSpectrum {
  double nu_minus = 0.0;
  double nu_plus = 0.0;
};

enum class Physicality { Physical, NonSymmetric, NotPositiveDefinite, Unphysical };

struct PhysicalityVerdict {
  Physicality status = Physicality::Physical;
  /// Offending margin: asymmetry, smallest eigenvalue, or nu_minus - 1/2.
  double margin = 0.0;
  double nu_minus = 0.0;
  double nu_plus = 0.0;
  double robertson = 0.0;  // D = det(V + i Omega / 2)

  bool physical() const { return status == Physicality::Physical; }
};

enum class Separability { Separable, Entangled, Boundary };

struct SeparabilityVerdict {
  Separability verdict = Separability::Separable;
  double simon = 0.0;              // margin D~
  double kappa_tilde_minus = 0.0;  // smallest PPT symplectic eigenvalue
};

struct ClassicalityMargin {
  double margin = 0.0;  // smallest eigenvalue of V - I/2
  std::array<double, 4> leading_minors{};

  bool classical() const { return margin >= 0.0; }
};

/// Non-throwing physicality check; status reports the first violated condition.
PhysicalityVerdict assess_physicality(const CovarianceMatrix& v, double tol = kDefaultTol);

/// As assess_physicality, but throws NonSymmetric / NotPositiveDefinite /
/// Unphysical carrying the offending margin.
PhysicalityVerdict validate_physical(const CovarianceMatrix& v, double tol = kDefaultTol);

/// Symplectic eigenvalues from the invariants (Delta, det V).
SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& v, double tol = kDefaultTol);

/// Symplectic eigenvalues of the partially transposed covariance matrix.
SymplecticSpectrum ppt_spectrum(const CovarianceMatrix& v, double tol = kDefaultTol);

/// det(V + i Omega / 2) for an arbitrary 4x4 covariance matrix.
double robertson_discriminant(const CovarianceMatrix& v);

/// Simon discriminant det(V~ + i Omega / 2).
double simon_discriminant(const StandardFormParams& sf);
double simon_discriminant(const CovarianceMatrix& v);

SeparabilityVerdict classify_separability(const CovarianceMatrix& v, double tol = kDefaultTol);
SeparabilityVerdict classify_separability(const StandardFormParams& sf, double tol = kDefaultTol);

ClassicalityMargin classicality_margin(const CovarianceMatrix& v);

StandardFormParams reduce_to_standard_form(const CovarianceMatrix& v, double tol = kDefaultTol);

/// The scaled standard form V(u1, u2); u = (1, 1) gives the plain standard form.
CovarianceMatrix build_scaled_cm(const StandardFormParams& sf, ScalingFactors u = {});

/// Rotation by theta followed by squeezing exp(-r) on q, exp(r) on p, per mode.
Matrix4 local_symplectic(double theta1, double r1, double theta2, double r2);

/// S V S^T.
CovarianceMatrix congruence(const CovarianceMatrix& v, const Matrix4& s);

}  // namespace tmgs
