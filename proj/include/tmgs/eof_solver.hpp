#pragma once

// Exact Gaussian entanglement of formation of a two-mode state given in
// standard form. The optimum is a TMSVS V0(x_m) displaced by a classical
// Gaussian distribution at local scalings (w1, w2); EF is the entropy of V0.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "tmgs/gaussian.hpp"
#include "tmgs/tmsvs.hpp"

namespace tmgs {

enum class SolutionBranch { GeneralQuartic, Symmetric, SqueezedThermal, Boundary, Separable, KappaHalf };

std::string_view to_string(SolutionBranch branch);

struct Residuals {
  double purity = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  double max_abs() const;
  std::array<double, 4> as_array() const { return {purity, c1, c2, c3}; }
};

struct EntropyValue {
  double nats = 0.0;
  double ebits = 0.0;
};

/// One real quartic root examined by the general path.
struct QuarticCandidate {
  double p = 0.0;
  int multiplicity = 1;
  double x = 0.0;
  double y = 0.0;
  ScalingFactors w;
  Residuals residuals;
  double partner_gap = 0.0;  // lambda_min(V(w) - V0(x))
  bool feasible = false;
  std::string rejection;  // empty when feasible
};

struct OptimalDecomposition {
  double p_m = 1.0;
  ScalingFactors w;
  TmsvsParams tmsvs;
  double ef_nats = 0.0;
  double ef_ebits = 0.0;
  Residuals residuals;
  SolutionBranch branch = SolutionBranch::GeneralQuartic;
  std::vector<QuarticCandidate> candidates;  // general path only
  int feasible_count = 0;
  bool scaling_below_one = false;  // w1 < 1 or w2 < 1
  std::string note;                // why a closed form was bypassed, if it was
};

struct SolverOptions {
  double tol = kDefaultTol;
  double manifold_tol = 1e-9;
  double residual_gate = 1e-9;
  double partner_tol = 1e-9;
  bool force_general = false;
};

/// [A0, A1, A2, A3, A4], ascending. Requires d < 0 and c >= |d|.
std::array<double, 5> quartic_coefficients(const StandardFormParams& sf);
double quartic_at(const StandardFormParams& sf, double p);

/// [B0, B1, B2] of B2 y^2 + B1 y + B0 at the given p.
std::array<double, 3> y_trinomial(const StandardFormParams& sf, double p);

/// Scalings (u1, u2 = p / u1) consistent with the optimality equations.
ScalingFactors recover_scalings(const StandardFormParams& sf, double p, double x, double y);

Residuals residuals(const StandardFormParams& sf, double u1, double u2, double x, double y);

EntropyValue entropy_of_formation(double x, double tol = kDefaultTol);

OptimalDecomposition solve_eof(const StandardFormParams& sf, const SolverOptions& options = {});

OptimalDecomposition solve_special_symmetric(const StandardFormParams& sf, double manifold_tol = 1e-9);
OptimalDecomposition solve_special_squeezed_thermal(const StandardFormParams& sf, double manifold_tol = 1e-9);
OptimalDecomposition solve_special_kappa_half(const StandardFormParams& sf, double manifold_tol = 1e-9);

/// Zero-entanglement solution: x = 1/2 and the boundary scalings.
OptimalDecomposition solve_separable(const StandardFormParams& sf, bool on_boundary);

/// lambda_min(V(w) - V0(x)); non-negative iff the partner is classical.
double partner_gap(const StandardFormParams& sf, ScalingFactors w, double x);

}  // namespace tmgs
