#include "tmgs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <Eigen/Dense>

namespace tmgs {

namespace {

constexpr double kFeasible = -1e-12;
constexpr double kInvPhi = 0.6180339887498949;

// Writing x = cosh(r) / 2, y = sinh(r) / 2 makes V0 convex in r (in the Loewner
// order), so f(r) = lambda_min(V - V0(r)) is concave and the feasible r form an
// interval. Feasibility is not monotone in x: V0 eventually outgrows V.
class Slice {
 public:
  Slice(const StandardFormParams& sf, double u1, double u2) : v_(build_scaled_cm(sf, {u1, u2}).matrix()) {}

  double operator()(double r) const {
    const double ch = 0.5 * std::cosh(r);
    const double sh = 0.5 * std::sinh(r);
    Matrix4 diff = v_;
    diff.diagonal().array() -= ch;
    diff(0, 2) -= sh;
    diff(2, 0) -= sh;
    diff(1, 3) += sh;
    diff(3, 1) += sh;
    Eigen::SelfAdjointEigenSolver<Matrix4> es(diff, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }

  // V0(r) has eigenvalues e^{+-r} / 2, so nothing beyond ln(2 lambda_max(V)) is feasible.
  double r_max() const {
    Eigen::SelfAdjointEigenSolver<Matrix4> es(v_, Eigen::EigenvaluesOnly);
    const double top = 2.0 * es.eigenvalues()(3);
    return top > 1.0 ? std::log(top) : 0.0;
  }

 private:
  Matrix4 v_;
};

double x_of(double r) { return 0.5 * std::cosh(r); }

// Smallest feasible r in [0, hi], given f(0) infeasible and f(hi) feasible.
double first_feasible(const Slice& f, double hi, double x_tol) {
  double lo = 0.0;
  while (x_of(hi) - x_of(lo) > x_tol && hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= kFeasible) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Golden-section ascent on the concave f over [lo, hi]. Stops at the first
// feasible point; otherwise `top` ends as the bracket's best value.
std::optional<double> find_feasible(const Slice& f, double lo, double hi, double& top) {
  double a = hi - kInvPhi * (hi - lo);
  double b = lo + kInvPhi * (hi - lo);
  double fa = f(a);
  top = std::max(top, fa);
  if (fa >= kFeasible) return a;
  double fb = f(b);
  top = std::max(top, fb);
  if (fb >= kFeasible) return b;
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kInvPhi * (hi - lo);
      fb = f(b);
      top = std::max(top, fb);
      if (fb >= kFeasible) return b;
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kInvPhi * (hi - lo);
      fa = f(a);
      top = std::max(top, fa);
      if (fa >= kFeasible) return a;
    }
  }
  return std::nullopt;
}

// Node ranking: feasible nodes by x; infeasible ones after them, ordered by
// how close they come to feasibility so the search can climb into a small
// feasible set. Pruned nodes rank last.
struct Merit {
  enum Kind { Feasible, Infeasible, Pruned } kind = Pruned;
  double value = 0.0;  // x, or -max_r f(r)

  static Merit feasible(double x) { return {Feasible, x}; }
  static Merit infeasible(double top) { return {Infeasible, -top}; }
  static Merit pruned() { return {}; }

  friend bool operator<(const Merit& a, const Merit& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.kind != Pruned && a.value < b.value;
  }
  friend bool operator<=(const Merit& a, const Merit& b) { return !(b < a); }
};

// With a feasible incumbent at r_inc, nodes that cannot beat it are pruned.
Merit node_merit(const Slice& f, std::optional<double> r_inc, double x_tol) {
  const double f0 = f(0.0);
  if (f0 >= kFeasible) return Merit::feasible(kVacuumVariance);
  double top = f0;
  double hi = f.r_max();
  if (r_inc) {
    const double at = f(*r_inc);
    if (at >= kFeasible) return Merit::feasible(x_of(first_feasible(f, *r_inc, x_tol)));
    // Infeasible at the incumbent: if f still rises there, the feasible
    // interval (if any) lies to the right and cannot improve.
    const double h = 1e-7 * std::max(1.0, *r_inc);
    if (f(*r_inc - h) <= at) return Merit::pruned();
    hi = std::min(hi, *r_inc);
    if (hi <= 0.0) return Merit::pruned();
    const auto r = find_feasible(f, 0.0, hi, top);
    if (!r) return Merit::pruned();
    return Merit::feasible(x_of(first_feasible(f, *r, x_tol)));
  }
  if (hi <= 0.0) return Merit::infeasible(top);
  const auto r = find_feasible(f, 0.0, hi, top);
  if (!r) return Merit::infeasible(top);
  return Merit::feasible(x_of(first_feasible(f, *r, x_tol)));
}

double entropy_nats(double x) {
  if (x <= kVacuumVariance) return 0.0;
  const double minus = x - 0.5;
  return (x + 0.5) * std::log(x + 0.5) - (minus > 0.0 ? minus * std::log(minus) : 0.0);
}

struct Incumbent {
  Merit merit;
  double l1 = 0.0;  // log u1
  double l2 = 0.0;  // log u2

  bool feasible() const { return merit.kind == Merit::Feasible; }
  bool improved_by(const Merit& m, double c1, double c2) const {
    if (m < merit) return true;
    if (merit < m || m.kind == Merit::Pruned) return false;
    return c1 < l1 || (c1 == l1 && c2 < l2);
  }
};

Merit node_value(const StandardFormParams& sf, double l1, double l2, double x_tol) {
  return node_merit(Slice(sf, std::exp(l1), std::exp(l2)), std::nullopt, x_tol);
}

// Golden-section minimum of a unimodal g on [lo, hi]; returns (argmin, value).
template <typename G>
auto golden_min(G&& g, double lo, double hi, double tol) {
  double a = hi - kInvPhi * (hi - lo);
  double b = lo + kInvPhi * (hi - lo);
  auto ga = g(a);
  auto gb = g(b);
  while (hi - lo > tol) {
    if (ga <= gb) {
      hi = b;
      b = a;
      gb = ga;
      a = hi - kInvPhi * (hi - lo);
      ga = g(a);
    } else {
      lo = a;
      a = b;
      ga = gb;
      b = lo + kInvPhi * (hi - lo);
      gb = g(b);
    }
  }
  return ga <= gb ? std::pair(a, ga) : std::pair(b, gb);
}

}  // namespace

std::optional<double> min_x_given_scaling(const StandardFormParams& sf, double u1, double u2, double x_tol) {
  const Merit m = node_merit(Slice(sf, u1, u2), std::nullopt, x_tol);
  if (m.kind != Merit::Feasible) return std::nullopt;
  return m.value;
}

OracleResult brute_force_eof(const StandardFormParams& sf, const OracleConfig& config) {
  OracleResult out;
  if (sf.simon() >= -kDefaultTol) {
    out.separable = true;
    return out;
  }

  const int n = std::max(3, config.grid_points_per_axis | 1);  // odd, so the centre is a node
  double c1 = 0.0;
  double c2 = 0.0;
  double half = std::log(config.log_range);
  Incumbent best;

  for (int round = 0; round <= config.refine_iterations; ++round) {
    const double cell = 2.0 * half / (n - 1);
    int bi = -1;
    int bj = -1;
    for (int i = 0; i < n; ++i) {
      const double l1 = c1 - half + i * cell;
      for (int j = 0; j < n; ++j) {
        const double l2 = c2 - half + j * cell;
        ++out.evaluations;
        const Slice f(sf, std::exp(l1), std::exp(l2));
        std::optional<double> r_inc;
        if (best.feasible()) r_inc = std::acosh(2.0 * best.merit.value);
        const Merit m = node_merit(f, r_inc, config.x_bisection_tol);
        if (best.improved_by(m, l1, l2)) {
          best = {m, l1, l2};
          bi = i;
          bj = j;
        }
      }
    }
    out.resolution = cell;
    // Recentre; only shrink when the optimum is inside the box.
    const bool on_edge = bi == 0 || bi == n - 1 || bj == 0 || bj == n - 1;
    c1 = best.l1;
    c2 = best.l2;
    if (!on_edge) half *= config.shrink;
    if (cell < config.min_cell && best.feasible()) break;
  }

  out.grid_x = best.merit.value;
  if (config.polish) {
    // x(u) has a crease along the optimal valley, which a lattice cannot follow.
    // Nested line searches can: each is unimodal across the crease. The box is
    // recentred while the optimum keeps landing on its edge.
    const double reach = config.polish_cells * out.resolution;
    // The valley may run steeply in (log u1, log u2); the inner search spans
    // far enough to find it wherever the outer search goes.
    const double span = std::max(reach, config.polish_span);
    const double tol = 1e-10;
    for (int pass = 0; pass < 50; ++pass) {
      const Incumbent centre = best;
      double l2_at = centre.l2;
      auto along_l2 = [&](double l1) {
        const auto [l2, x] = golden_min([&](double l) { return node_value(sf, l1, l, config.x_bisection_tol); },
                                        centre.l2 - span, centre.l2 + span, tol);
        l2_at = l2;
        return x;
      };
      const double l1 = golden_min(along_l2, centre.l1 - reach, centre.l1 + reach, tol).first;
      along_l2(l1);
      const double l2 = l2_at;
      const Merit x = node_value(sf, l1, l2, config.x_bisection_tol);
      ++out.evaluations;
      if (!(x <= best.merit)) break;
      best = {x, l1, l2};
      const double edge = 0.99 * reach;
      if (std::abs(l1 - centre.l1) < edge) break;
    }
  }
  out.found = best.feasible();
  if (!out.found) {
    out.ef_nats = out.ef_ebits = out.x_star = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.x_star = best.merit.value;
  out.u_star = {std::exp(best.l1), std::exp(best.l2)};
  out.ef_nats = entropy_nats(best.merit.value);
  out.ef_ebits = out.ef_nats / std::numbers::ln2;
  return out;
}

}  // namespace tmgs
