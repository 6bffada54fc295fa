#include "tmgs/polyroot.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "tmgs/error.hpp"

namespace tmgs {

namespace {

constexpr double kTrimThreshold = 1e-13;
constexpr double kPolishTarget = 1e-13;
constexpr double kResidualGate = 1e-10;
constexpr double kMergeThreshold = 1e-7;
constexpr double kImagThreshold = 1e-5;
constexpr int kMaxPolishIterations = 100;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Sum of |a_i x^i|: the magnitude that bounds the rounding error of poly(x).
double evaluation_magnitude(const std::vector<double>& a, double x) {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

double residual_scale(const Polynomial& poly, double x) {
  return std::max(poly.scale(), evaluation_magnitude(poly.coefficients(), x));
}

std::vector<std::complex<double>> companion_roots(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  if (n == 1) return {std::complex<double>(-a[0] / a[1], 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -a[static_cast<std::size_t>(i)] / a.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  if (coeffs_.size() > 5) {
    throw Error(ErrorCode::DegreeTooHigh,
                "polynomials of degree > 4 are not supported (got " +
                    std::to_string(coeffs_.size()) + " coefficients)");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw Error(ErrorCode::DomainError, "non-finite coefficient");
  }
}

double Polynomial::scale() const {
  double s = 0.0;
  for (double c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

int Polynomial::effective_degree() const {
  const double threshold = kTrimThreshold * scale();
  int deg = static_cast<int>(coeffs_.size()) - 1;
  while (deg >= 0 && std::abs(coeffs_[static_cast<std::size_t>(deg)]) <= threshold) --deg;
  return deg;
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::derivative_at(double x) const {
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * coeffs_[i];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(static_cast<double>(i) * coeffs_[i]);
  return Polynomial(std::move(d));
}

PolishResult polish(const Polynomial& poly, double x0) {
  const auto& a = poly.coefficients();
  const double target = kPolishTarget * poly.scale();

  PolishResult best{x0, false, 0};
  double x = x0;
  double fx = poly(x);
  double best_f = std::abs(fx);

  // Sign-change bracket, once one is seen.
  bool bracketed = false;
  double lo = 0.0;
  double hi = 0.0;

  for (int it = 1; it <= kMaxPolishIterations; ++it) {
    best.iterations = it;
    const double noise = 4.0 * kEps * evaluation_magnitude(a, x);
    if (std::abs(fx) <= std::max(target, noise)) {
      best.root = x;
      best.converged = true;
      return best;
    }
    const double dfx = poly.derivative_at(x);
    double step = dfx != 0.0 ? fx / dfx : 0.0;
    double candidate = x - step;
    if (bracketed && !(candidate > lo && candidate < hi)) {
      candidate = 0.5 * (lo + hi);
    } else if (dfx == 0.0) {
      if (!bracketed) break;
      candidate = 0.5 * (lo + hi);
    }

    double fc = poly(candidate);
    if (!bracketed) {
      // Damped Newton until the residual stops growing.
      for (int halving = 0; halving < 40 && std::abs(fc) > std::abs(fx); ++halving) {
        step *= 0.5;
        candidate = x - step;
        fc = poly(candidate);
      }
    }
    if ((fx < 0.0) != (fc < 0.0) && fc != 0.0) {
      bracketed = true;
      lo = std::min(x, candidate);
      hi = std::max(x, candidate);
    } else if (bracketed) {
      // Shrink the bracket onto the side that keeps the sign change.
      const double f_lo = poly(lo);
      if ((f_lo < 0.0) != (fc < 0.0)) {
        hi = candidate;
      } else {
        lo = candidate;
      }
    }

    if (std::abs(candidate - x) <= 4.0 * kEps * std::max(1.0, std::abs(x))) {
      x = candidate;
      fx = fc;
      if (std::abs(fx) < best_f) {
        best_f = std::abs(fx);
        best.root = x;
      }
      // Stagnated at the floating-point floor: a (near-)multiple root.
      best.converged = std::abs(fx) <= std::max(1e3 * target, 64.0 * noise);
      return best;
    }
    x = candidate;
    fx = fc;
    if (std::abs(fx) < best_f) {
      best_f = std::abs(fx);
      best.root = x;
    }
  }
  best.converged = best_f <= target;
  return best;
}

RootSet real_roots(const Polynomial& poly) {
  const double scale = poly.scale();
  if (scale == 0.0) throw Error(ErrorCode::ZeroPolynomial, "zero polynomial has no isolated roots");

  const int degree = poly.effective_degree();
  std::vector<double> trimmed;
  for (int i = 0; i <= degree; ++i) trimmed.push_back(poly.coefficients()[static_cast<std::size_t>(i)] / scale);
  RootSet out;
  if (degree <= 0) return out;

  const Polynomial normalized(trimmed);

  std::vector<double> candidates;
  for (const auto& z : companion_roots(trimmed)) {
    const double reach = std::max(1.0, std::abs(z.real()));
    if (std::abs(z.imag()) <= kImagThreshold * reach) {
      const double polished = polish(normalized, z.real()).root;
      // A candidate that wanders off belongs to another root already listed.
      if (std::abs(polished - z.real()) <= 10.0 * kImagThreshold * reach) candidates.push_back(polished);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  // Merge clusters; a cluster of size m is refined on the (m-1)-th derivative,
  // whose root is simple.
  std::size_t i = 0;
  while (i < candidates.size()) {
    std::size_t j = i + 1;
    while (j < candidates.size() &&
           candidates[j] - candidates[j - 1] <= kMergeThreshold * std::max(1.0, std::abs(candidates[j]))) {
      ++j;
    }
    const int multiplicity = static_cast<int>(j - i);
    double value = 0.0;
    for (std::size_t k = i; k < j; ++k) value += candidates[k];
    value /= multiplicity;
    if (multiplicity > 1) {
      Polynomial d = normalized;
      for (int k = 1; k < multiplicity; ++k) d = d.derivative();
      const PolishResult refined = polish(d, value);
      if (std::abs(normalized(refined.root)) <= std::abs(normalized(value))) value = refined.root;
    }
    const double residual = std::abs(normalized(value));
    if (residual <= kResidualGate * residual_scale(normalized, value)) {
      out.roots.push_back({value, multiplicity, residual * scale});
    }
    i = j;
  }
  return out;
}

double smallest_root_quadratic(double b0, double b1, double b2) {
  if (!(b2 > 0.0)) throw Error(ErrorCode::DomainError, "leading coefficient must be positive", b2);
  double disc = b1 * b1 - 4.0 * b2 * b0;
  if (disc < 0.0) {
    const double scale = std::max({1.0, b1 * b1, std::abs(4.0 * b2 * b0)});
    if (disc < -1e-12 * scale) {
      throw Error(ErrorCode::NegativeDiscriminant, "quadratic has complex roots", disc);
    }
    disc = 0.0;
  }
  const double q = -0.5 * (b1 + std::copysign(std::sqrt(disc), b1));
  const double r1 = q / b2;
  const double r2 = q != 0.0 ? b0 / q : r1;
  return std::min(r1, r2);
}

}  // namespace tmgs
