#pragma once

// Shared state generators for the unit and acceptance suites. Everything here
// is written against gaussian_core only, so the closed forms below are an
// independent re-derivation rather than a call into the solver.

#include <cmath>
#include <optional>
#include <random>

#include "tmgs/gaussian.hpp"

namespace tmgs::testing {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline bool physical(const StandardFormParams& sf, double margin = 1e-6) {
  const PhysicalityVerdict v = assess_physicality(build_scaled_cm(sf));
  return v.physical() && v.nu_minus >= kVacuumVariance + margin;
}

inline bool entangled(const StandardFormParams& sf, double margin = 1e-6) { return sf.simon() < -margin; }

/// Random physical, entangled standard form with c > |d|.
inline StandardFormParams random_entangled(Sampler& s) {
  for (;;) {
    StandardFormParams sf;
    sf.b1 = s.uniform(0.6, 3.0);
    sf.b2 = s.uniform(0.6, 3.0);
    sf.c = s.uniform(0.0, std::sqrt(sf.b1 * sf.b2));
    sf.d = -sf.c * s.uniform(0.0, 1.0);
    if (physical(sf) && entangled(sf)) return sf;
  }
}

inline StandardFormParams random_physical(Sampler& s) {
  for (;;) {
    StandardFormParams sf;
    sf.b1 = s.uniform(0.6, 3.0);
    sf.b2 = s.uniform(0.6, 3.0);
    sf.c = s.uniform(0.0, std::sqrt(sf.b1 * sf.b2));
    sf.d = sf.c * s.uniform(-1.0, 1.0);
    if (physical(sf)) return sf;
  }
}

inline StandardFormParams random_symmetric(Sampler& s) {
  for (;;) {
    StandardFormParams sf;
    sf.b1 = sf.b2 = s.uniform(0.6, 3.0);
    sf.c = s.uniform(0.0, sf.b1);
    sf.d = -sf.c * s.uniform(0.0, 1.0);
    if (physical(sf) && entangled(sf)) return sf;
  }
}

inline StandardFormParams random_squeezed_thermal(Sampler& s) {
  for (;;) {
    StandardFormParams sf;
    sf.b1 = s.uniform(0.6, 3.0);
    sf.b2 = s.uniform(0.6, 3.0);
    sf.c = s.uniform(0.0, std::sqrt(sf.b1 * sf.b2));
    sf.d = -sf.c;
    if (physical(sf) && entangled(sf)) return sf;
  }
}

// With d = -t, t >= 0, both discriminants are quadratics in t:
//   D(t)  = -g t^2 + (c/2) t + k,   D~(t) = -g t^2 - (c/2) t + k,
// where g = b1 b2 - c^2 and k = g b1 b2 - (b1^2 + b2^2)/4 + 1/16.
inline std::optional<double> positive_root(double a2, double a1, double a0) {
  const double disc = a1 * a1 - 4.0 * a2 * a0;
  if (disc < 0.0 || a2 == 0.0) return std::nullopt;
  const double r1 = (-a1 + std::sqrt(disc)) / (2.0 * a2);
  const double r2 = (-a1 - std::sqrt(disc)) / (2.0 * a2);
  std::optional<double> best;
  for (double r : {r1, r2}) {
    if (r > 0.0 && (!best || r < *best)) best = r;
  }
  return best;
}

/// A state with D~ = 0 at the given (b1, b2, c), if one exists with |d| <= c.
inline std::optional<StandardFormParams> boundary_state(double b1, double b2, double c) {
  const double g = b1 * b2 - c * c;
  const double k = g * b1 * b2 - 0.25 * (b1 * b1 + b2 * b2) + 1.0 / 16.0;
  const auto t = positive_root(-g, -0.5 * c, k);
  if (!t || *t > c) return std::nullopt;
  const StandardFormParams sf{b1, b2, c, -*t};
  if (!physical(sf, 0.0)) return std::nullopt;
  return sf;
}

/// A state with D = 0 (nu_minus = 1/2) at the given (b1, b2, c), if one exists with 0 < |d| <= c.
inline std::optional<StandardFormParams> kappa_half_state(double b1, double b2, double c) {
  const double g = b1 * b2 - c * c;
  const double k = g * b1 * b2 - 0.25 * (b1 * b1 + b2 * b2) + 1.0 / 16.0;
  const auto t = positive_root(-g, 0.5 * c, k);
  if (!t || *t > c) return std::nullopt;
  StandardFormParams sf{b1, b2, c, -*t};
  const PhysicalityVerdict v = assess_physicality(build_scaled_cm(sf), 1e-9);
  if (!v.physical() || !entangled(sf)) return std::nullopt;
  return sf;
}

inline double entropy_nats(double x) {
  if (x <= 0.5) return 0.0;
  return (x + 0.5) * std::log(x + 0.5) - (x - 0.5) * std::log(x - 0.5);
}

// Closed forms, transcribed independently of the solver.

inline double symmetric_x(const StandardFormParams& sf) {
  const double k2 = (sf.b1 - sf.c) * (sf.b1 + sf.d);
  return (k2 + 0.25) / (2.0 * std::sqrt(k2));
}

inline double symmetric_w(const StandardFormParams& sf) { return std::sqrt((sf.b1 + sf.d) / (sf.b1 - sf.c)); }

inline double squeezed_thermal_x(const StandardFormParams& sf) {
  const double s = sf.b1 + sf.b2;
  const double c = sf.c;
  return (s * (sf.b1 * sf.b2 - c * c + 0.25) - 2.0 * c * std::sqrt(sf.robertson())) / (s * s - 4.0 * c * c);
}

struct KappaHalfForm {
  bool negative_branch = false;
  double x = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
};

/// Requires b1 >= b2.
inline KappaHalfForm kappa_half_form(const StandardFormParams& sf) {
  const double b1 = sf.b1, b2 = sf.b2, c = sf.c, ad = std::abs(sf.d);
  KappaHalfForm f;
  f.negative_branch = b2 * c - b1 * ad < 0.0;
  if (f.negative_branch) {
    f.x = (b1 * b1 - b2 * b2) / (8.0 * (sf.det_v() - 1.0 / 16.0));
    f.w1 = std::sqrt((b2 * (b1 * b2 - ad * ad) - 0.25 * b1) / (b2 * (b1 * b2 - c * c) - 0.25 * b1));
    f.w2 = std::sqrt((b1 * (b1 * b2 - ad * ad) - 0.25 * b2) / (b1 * (b1 * b2 - c * c) - 0.25 * b2));
  } else {
    f.x = 0.5 * std::sqrt(b1 * b2 / (b1 * b2 - ad * ad));
    f.w1 = 2.0 * std::sqrt(b1 / b2 * (b1 * b2 - ad * ad));
    f.w2 = 2.0 * std::sqrt(b2 / b1 * (b1 * b2 - ad * ad));
  }
  return f;
}

/// w1 on the separability boundary.
inline double boundary_w1(const StandardFormParams& sf) {
  const double b1 = sf.b1, b2 = sf.b2, c = sf.c, ad = std::abs(sf.d);
  return std::sqrt((b2 * (b1 * b2 - ad * ad) - 0.25 * b1) / (b2 * (b1 * b2 - c * c) - 0.25 * b1));
}

inline Matrix4 random_local_symplectic(Sampler& s) {
  const double pi = std::acos(-1.0);
  return local_symplectic(s.uniform(0.0, 2.0 * pi), s.uniform(-1.0, 1.0), s.uniform(0.0, 2.0 * pi),
                          s.uniform(-1.0, 1.0));
}

}  // namespace tmgs::testing
