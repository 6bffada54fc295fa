#pragma once

#include <vector>

namespace tmgs {

/// Real polynomial of degree at most four, coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  /// Throws DegreeTooHigh for more than five coefficients and DomainError for
  /// non-finite ones.
  explicit Polynomial(std::vector<double> ascending);

  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Largest |coefficient|; zero for the zero polynomial.
  double scale() const;
  /// Degree after dropping leading coefficients below 1e-13 * scale().
  int effective_degree() const;

  double operator()(double x) const;
  double derivative_at(double x) const;
  Polynomial derivative() const;

 private:
  std::vector<double> coeffs_;
};

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
  double residual = 0.0;  // |poly(value)|
};

struct RootSet {
  std::vector<RealRoot> roots;  // ascending

  bool empty() const { return roots.empty(); }
  std::size_t size() const { return roots.size(); }
};

struct PolishResult {
  double root = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// All real roots with multiplicity, polished. An empty set means no real roots;
/// the zero polynomial throws ZeroPolynomial.
RootSet real_roots(const Polynomial& poly);

/// Smaller root of B2 y^2 + B1 y + B0 (B2 > 0) via the cancellation-free branch.
/// Throws NegativeDiscriminant when the roots are complex beyond tolerance.
double smallest_root_quadratic(double b0, double b1, double b2);

/// Safeguarded Newton iteration. Stops once |poly(x)| <= 1e-13 * scale or after
/// 100 iterations; on exhaustion returns the best iterate with converged = false.
PolishResult polish(const Polynomial& poly, double x0);

}  // namespace tmgs
