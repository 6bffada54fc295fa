#pragma once

// Brute-force Gaussian EoF: minimize over local scalings (u1, u2) the smallest
// TMSVS parameter x with V(u1, u2) - V0(x) positive semidefinite. Independent
// of the algebraic solver; only the covariance-matrix types are shared.

#include <optional>

#include "tmgs/gaussian.hpp"

namespace tmgs {

struct OracleConfig {
  int grid_points_per_axis = 41;
  double log_range = 8.0;       // first grid spans u in [1/L, L] per axis
  int refine_iterations = 40;   // shrink-and-rescan rounds
  double shrink = 0.5;          // box half-width factor per round
  double x_bisection_tol = 1e-15;
  double min_cell = 1e-3;       // stop rescanning once the log-u cell is this small
  int polish_cells = 10;        // half-width, in final cells, of the outer polish box
  double polish_span = 1.0;     // half-width in log u2 of the inner polish search
  bool polish = true;           // nested golden-section search after the grid
};

struct OracleResult {
  double ef_nats = 0.0;
  double ef_ebits = 0.0;
  ScalingFactors u_star;
  double x_star = kVacuumVariance;
  double resolution = 0.0;  // log-u grid spacing of the last round
  double grid_x = kVacuumVariance;  // best grid node before polishing
  long evaluations = 0;     // scalings at which feasibility was examined
  bool separable = false;   // short-circuited by the PPT test
  bool found = true;        // false if no feasible scaling was located (EF is NaN)
};

/// Smallest x >= 1/2 such that V(u1, u2) - V0(x) >= -1e-12 (smallest eigenvalue),
/// or nullopt when no x works at this scaling.
std::optional<double> min_x_given_scaling(const StandardFormParams& sf, double u1, double u2,
                                          double x_tol = 1e-10);

OracleResult brute_force_eof(const StandardFormParams& sf, const OracleConfig& config = {});

}  // namespace tmgs
