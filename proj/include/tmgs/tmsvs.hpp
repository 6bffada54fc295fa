#pragma once

#include <cmath>

#include "tmgs/error.hpp"
#include "tmgs/gaussian.hpp"

namespace tmgs {

/// Two-mode squeezed vacuum parameters with x^2 - y^2 = 1/4. Only one of the
/// pair is ever supplied; the other is derived.
class TmsvsParams {
 public:
  TmsvsParams() = default;  // vacuum

  static TmsvsParams from_x(double x, double tol = kDefaultTol) {
    if (!(x >= kVacuumVariance - tol)) {
      throw Error(ErrorCode::DomainError, "TMSVS requires x >= 1/2", x - kVacuumVariance);
    }
    x = std::max(x, kVacuumVariance);
    return TmsvsParams(x, std::sqrt(std::max(0.0, (x - 0.5) * (x + 0.5))));
  }

  static TmsvsParams from_y(double y, double tol = kDefaultTol) {
    if (!(y >= -tol)) throw Error(ErrorCode::DomainError, "TMSVS requires y >= 0", y);
    y = std::max(y, 0.0);
    return TmsvsParams(std::sqrt(y * y + 0.25), y);
  }

  double x() const { return x_; }
  double y() const { return y_; }

 private:
  TmsvsParams(double x, double y) : x_(x), y_(y) {}

  double x_ = kVacuumVariance;
  double y_ = 0.0;
};

}  // namespace tmgs
