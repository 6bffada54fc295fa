#include "tmgs/eof_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "tmgs/decomposition.hpp"
#include "tmgs/error.hpp"
#include "tmgs/polyroot.hpp"

namespace tmgs {

namespace {

constexpr double kRecoveryGate = 1e-7;
constexpr double kCandidateFloor = 1e-9;  // quartic roots p >= 1 - kCandidateFloor are admissible
constexpr double kRepeatedFloor = 1e-5;   // repeated roots are only located to ~sqrt(eps)
constexpr double kSeedWindow = 1e-6;      // relative |Q(1)| below which p = 1 is tried as a seed

void require_entangled_convention(const StandardFormParams& sf) {
  if (!(sf.d < 0.0)) {
    throw Error(ErrorCode::ConventionViolation, "expected d < 0 for an entangled standard form", sf.d);
  }
  const double a = -sf.d;
  if (sf.c < a * (1.0 - 1e-12)) {
    throw Error(ErrorCode::ConventionViolation, "expected c >= |d|", sf.c - a);
  }
}

void require_physical(const StandardFormParams& sf, double tol) {
  const PhysicalityVerdict v = assess_physicality(build_scaled_cm(sf), tol);
  if (!v.physical()) {
    throw Error(ErrorCode::Unphysical, "standard form is not a physical covariance matrix", v.margin);
  }
}

// A0 with the roles of c and |d| as given; A4 is the same with them exchanged.
double outer_coefficient(double b1, double b2, double dd) {
  const double g = b1 * b2 - dd;
  return g * (b1 * g - 0.25 * b2) * (b2 * g - 0.25 * b1);
}

// A1 for (c, a = |d|); A3 is the same with them exchanged.
double odd_coefficient(double b1, double b2, double c, double a) {
  const double g = b1 * b2 - a * a;
  const double lead = c * g + 0.25 * a;
  const double diff = b1 - b2;
  return -lead * (diff * diff * lead + 2.0 * b1 * b2 * (c - a) * (g - 0.25));
}

OptimalDecomposition finish(const StandardFormParams& sf, SolutionBranch branch, ScalingFactors w,
                            TmsvsParams t) {
  OptimalDecomposition out;
  out.branch = branch;
  out.w = w;
  out.p_m = w.product();
  out.tmsvs = t;
  const EntropyValue ef = entropy_of_formation(t.x());
  out.ef_nats = ef.nats;
  out.ef_ebits = ef.ebits;
  out.residuals = residuals(sf, w.u1, w.u2, t.x(), t.y());
  out.scaling_below_one = w.u1 < 1.0 || w.u2 < 1.0;
  return out;
}

double ratio_sqrt(double num, double den) {
  if (!(num > 0.0) || !(den > 0.0)) {
    throw Error(ErrorCode::DomainError, "closed-form scaling has a non-positive radicand", std::min(num, den));
  }
  return std::sqrt(num / den);
}

// Boundary scaling formula, also used for strictly separable states.
ScalingFactors boundary_scalings(const StandardFormParams& sf) {
  const double g_d = sf.b1 * sf.b2 - sf.d * sf.d;
  const double g_c = sf.b1 * sf.b2 - sf.c * sf.c;
  const double n1 = sf.b2 * g_d - 0.25 * sf.b1;
  const double d1 = sf.b2 * g_c - 0.25 * sf.b1;
  const double n2 = sf.b1 * g_d - 0.25 * sf.b2;
  const double d2 = sf.b1 * g_c - 0.25 * sf.b2;
  if (n1 > 0.0 && d1 > 0.0 && n2 > 0.0 && d2 > 0.0) return {std::sqrt(n1 / d1), std::sqrt(n2 / d2)};
  return {1.0, 1.0};
}

struct Unknowns {
  double u1;
  double u2;
  double y;
};

Eigen::Vector3d equations(const StandardFormParams& sf, const Unknowns& z) {
  const double x = std::sqrt(z.y * z.y + 0.25);
  const Residuals r = residuals(sf, z.u1, z.u2, x, z.y);
  return {r.c1, r.c2, r.c3};
}

// Newton polish of (ln u1, ln u2, y) on the three optimality equations. The
// quartic root is only as accurate as its conditioning allows; this removes
// that error without changing which solution is selected.
Unknowns refine(const StandardFormParams& sf, Unknowns z) {
  Eigen::Vector3d f = equations(sf, z);
  double norm = f.cwiseAbs().maxCoeff();
  const Unknowns start = z;
  for (int it = 0; it < 20 && norm > 1e-15; ++it) {
    Eigen::Matrix3d jac;
    const double h = 1e-7;
    for (int k = 0; k < 3; ++k) {
      Unknowns plus = z;
      Unknowns minus = z;
      if (k == 0) {
        plus.u1 *= std::exp(h);
        minus.u1 *= std::exp(-h);
      } else if (k == 1) {
        plus.u2 *= std::exp(h);
        minus.u2 *= std::exp(-h);
      } else {
        const double hy = h * std::max(1.0, z.y);
        plus.y += hy;
        minus.y -= hy;
        jac.col(k) = (equations(sf, plus) - equations(sf, minus)) / (2.0 * hy);
        continue;
      }
      jac.col(k) = (equations(sf, plus) - equations(sf, minus)) / (2.0 * h);
    }
    const Eigen::Vector3d step = jac.completeOrthogonalDecomposition().solve(-f);
    if (!step.allFinite()) break;
    bool improved = false;
    for (double scale = 1.0; scale > 1e-3; scale *= 0.5) {
      Unknowns trial{z.u1 * std::exp(scale * step(0)), z.u2 * std::exp(scale * step(1)), z.y + scale * step(2)};
      if (trial.y < 0.0) continue;
      const Eigen::Vector3d ft = equations(sf, trial);
      const double nt = ft.cwiseAbs().maxCoeff();
      if (nt < norm) {
        z = trial;
        f = ft;
        norm = nt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  // A large move means Newton found some other solution; keep the original.
  const bool stayed = std::abs(std::log(z.u1 / start.u1)) < 1e-3 && std::abs(std::log(z.u2 / start.u2)) < 1e-3 &&
                      std::abs(z.y - start.y) < 1e-3 * std::max(1.0, start.y);
  return stayed ? z : start;
}

bool passes_gate(const OptimalDecomposition& sol, const StandardFormParams& sf, const SolverOptions& opt,
                 std::string& why) {
  if (!(sol.residuals.max_abs() <= opt.residual_gate)) {
    std::ostringstream os;
    os << "residual " << sol.residuals.max_abs() << " above gate";
    why = os.str();
    return false;
  }
  const double gap = partner_gap(sf, sol.w, sol.tmsvs.x());
  if (gap < -opt.partner_tol) {
    std::ostringstream os;
    os << "partner not classical (lambda_min " << gap << ")";
    why = os.str();
    return false;
  }
  return true;
}

std::string describe(const std::vector<QuarticCandidate>& cands) {
  std::ostringstream os;
  os.precision(12);
  os << "no quartic root gives a feasible decomposition; candidates:";
  if (cands.empty()) os << " none";
  for (const auto& c : cands) {
    os << "\n  p=" << c.p << " (mult " << c.multiplicity << ") x=" << c.x << " y=" << c.y << " w=(" << c.w.u1
       << ", " << c.w.u2 << ") max|res|=" << c.residuals.max_abs() << " gap=" << c.partner_gap << ": "
       << c.rejection;
  }
  return os.str();
}

// With lenient set, a complex pair yields its real part as a seed for refine().
std::vector<ScalingFactors> scaling_roots(const StandardFormParams& sf, double p, double x, double y,
                                          bool lenient = false) {
  if (!(p > 0.0) || !(x > 0.0)) throw Error(ErrorCode::NoPositiveRoot, "p and x must be positive", p);
  const double k = (sf.c * std::sqrt(p) - y) * (sf.c * std::sqrt(p) - y);
  // x b1 u^2 - (b1 b2 p + x^2 - K) u + x b2 p = 0
  const double qa = x * sf.b1;
  const double qb = -(sf.b1 * sf.b2 * p + x * x - k);
  const double qc = x * sf.b2 * p;
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) {
    // Double roots (u1 = u2 on symmetric states) sit right at disc = 0.
    if (!lenient && disc < -1e-8 * std::max(qb * qb, std::abs(4.0 * qa * qc))) {
      throw Error(ErrorCode::NoPositiveRoot, "scaling quadratic has complex roots", disc);
    }
    disc = 0.0;
  }
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  std::vector<double> roots;
  if (q != 0.0) {
    roots.push_back(q / qa);
    roots.push_back(qc / q);
  }
  // Near a double root sqrt(disc) is pure rounding noise; the vertex is exact there.
  if (disc <= 1e-6 * qb * qb) roots.push_back(-qb / (2.0 * qa));

  std::vector<ScalingFactors> out;
  for (double u1 : roots) {
    if (u1 > 0.0 && std::isfinite(u1)) out.push_back({u1, p / u1});
  }
  if (out.empty()) throw Error(ErrorCode::NoPositiveRoot, "scaling quadratic has no positive root");
  return out;
}

double joint_residual(const StandardFormParams& sf, ScalingFactors w, double x, double y) {
  const Residuals r = residuals(sf, w.u1, w.u2, x, y);
  return std::max(std::abs(r.c2), std::abs(r.c3));
}

OptimalDecomposition solve_general(const StandardFormParams& sf, const SolverOptions& opt) {
  require_entangled_convention(sf);
  const auto coeffs = quartic_coefficients(sf);
  const RootSet roots = real_roots(Polynomial(std::vector<double>(coeffs.begin(), coeffs.end())));

  auto evaluate = [&](double root_value, int multiplicity, double p) {
    QuarticCandidate cand;
    cand.p = root_value;
    cand.multiplicity = multiplicity;
    try {
      const auto b = y_trinomial(sf, p);
      double y = smallest_root_quadratic(b[0], b[1], b[2]);
      if (y < -opt.tol) throw Error(ErrorCode::DomainError, "negative y", y);
      y = std::max(y, 0.0);
      double x = std::sqrt(y * y + 0.25);
      cand.x = x;
      cand.y = y;
      // Close to a repeated quartic root p is only good to ~sqrt(eps), so every
      // scaling root gets polished before anything is gated.
      Unknowns z{};
      double z_res = std::numeric_limits<double>::infinity();
      for (const ScalingFactors& w0 : scaling_roots(sf, p, x, y, true)) {
        const Unknowns zi = refine(sf, {w0.u1, w0.u2, y});
        const double ri = equations(sf, zi).cwiseAbs().maxCoeff();
        if (!(ri >= z_res)) {
          z = zi;
          z_res = ri;
        }
      }
      ScalingFactors w{z.u1, z.u2};
      y = z.y;
      x = std::sqrt(y * y + 0.25);
      cand.x = x;
      cand.y = y;
      cand.w = w;
      cand.residuals = residuals(sf, w.u1, w.u2, x, y);
      cand.partner_gap = partner_gap(sf, w, x);
      if (!(cand.residuals.max_abs() <= opt.residual_gate)) {
        cand.rejection = "residual above gate";
      } else if (cand.partner_gap < -opt.partner_tol) {
        cand.rejection = "partner not classical";
      } else {
        cand.feasible = true;
      }
    } catch (const Error& e) {
      cand.rejection = std::string(to_string(e.code())) + ": " + e.what();
    }
    return cand;
  };

  std::vector<QuarticCandidate> cands;
  const QuarticCandidate* best = nullptr;
  for (std::size_t i = 0; i < roots.roots.size(); ++i) {
    const RealRoot& root = roots.roots[i];
    // rounding can split a double root into two close simple ones
    const bool clustered = root.multiplicity > 1 ||
                           (i > 0 && roots.roots[i].value - roots.roots[i - 1].value < kRepeatedFloor) ||
                           (i + 1 < roots.roots.size() && roots.roots[i + 1].value - root.value < kRepeatedFloor);
    const double floor = clustered ? kRepeatedFloor : kCandidateFloor;
    if (root.value < 1.0 - floor) continue;
    cands.push_back(evaluate(root.value, root.multiplicity, std::max(root.value, 1.0 - kCandidateFloor)));
  }

  // Next to the c = |d| manifold the root near p = 1 is lost in rounding of the
  // quartic itself. The optimum there is continuous in (w, y), so seed at p = 1.
  const bool any_feasible = std::any_of(cands.begin(), cands.end(), [](const auto& c) { return c.feasible; });
  double scale = 0.0;
  for (double a : coeffs) scale += std::abs(a);
  if (!any_feasible && std::abs(quartic_at(sf, 1.0)) <= kSeedWindow * scale) {
    cands.push_back(evaluate(1.0, 0, 1.0));
  }

  int feasible = 0;
  for (const auto& c : cands) {
    if (!c.feasible) continue;
    ++feasible;
    if (best == nullptr || c.x < best->x) best = &c;
  }
  if (best == nullptr) throw Error(ErrorCode::NoFeasibleRoot, describe(cands));

  OptimalDecomposition out =
      finish(sf, SolutionBranch::GeneralQuartic, best->w, TmsvsParams::from_y(best->y));
  out.candidates = std::move(cands);
  out.feasible_count = feasible;
  return out;
}

}  // namespace

std::string_view to_string(SolutionBranch branch) {
  switch (branch) {
    case SolutionBranch::GeneralQuartic:
      return "general-quartic";
    case SolutionBranch::Symmetric:
      return "symmetric";
    case SolutionBranch::SqueezedThermal:
      return "squeezed-thermal";
    case SolutionBranch::Boundary:
      return "boundary";
    case SolutionBranch::Separable:
      return "separable";
    case SolutionBranch::KappaHalf:
      return "kappa-half";
  }
  return "unknown";
}

double Residuals::max_abs() const {
  return std::max({std::abs(purity), std::abs(c1), std::abs(c2), std::abs(c3)});
}

std::array<double, 5> quartic_coefficients(const StandardFormParams& sf) {
  require_entangled_convention(sf);
  const double b1 = sf.b1;
  const double b2 = sf.b2;
  const double c = sf.c;
  const double a = -sf.d;
  const double det_v = sf.det_v();
  const double dd = sf.robertson();
  const double z = sf.z();

  const double a0 = outer_coefficient(b1, b2, a * a);
  const double a1 = odd_coefficient(b1, b2, c, a);
  const double a2 = ((b1 * c - b2 * a) * (b1 * a - b2 * c) + c * a * z) * (det_v + 1.0 / 16.0) -
                    2.0 * (b1 * b1 * b2 * b2 - c * c * a * a) * dd - c * a * det_v;
  const double a3 = odd_coefficient(b1, b2, a, c);
  const double a4 = outer_coefficient(b1, b2, c * c);
  return {a0, a1, a2, a3, a4};
}

double quartic_at(const StandardFormParams& sf, double p) {
  const auto a = quartic_coefficients(sf);
  return (((a[4] * p + a[3]) * p + a[2]) * p + a[1]) * p + a[0];
}

std::array<double, 3> y_trinomial(const StandardFormParams& sf, double p) {
  const double b1 = sf.b1;
  const double b2 = sf.b2;
  const double c = sf.c;
  const double a = std::abs(sf.d);
  const double g_c = b1 * b2 - c * c;
  const double g_d = b1 * b2 - a * a;
  const double root_p = std::sqrt(p);
  const double t0 = -sf.simon() * p;
  const double t1 = -2.0 * root_p * ((a * g_c + 0.25 * c) * p + (c * g_d + 0.25 * a));
  const double t2 = g_c * p * p + sf.z() * p + g_d;
  return {t0, t1, t2};
}

ScalingFactors recover_scalings(const StandardFormParams& sf, double p, double x, double y) {
  ScalingFactors best;
  double best_res = std::numeric_limits<double>::infinity();
  for (const ScalingFactors& w : scaling_roots(sf, p, x, y)) {
    const double joint = joint_residual(sf, w, x, y);
    if (!(joint >= best_res)) {
      best = w;
      best_res = joint;
    }
  }
  if (best_res > kRecoveryGate) {
    throw Error(ErrorCode::ResidualTooLarge, "scalings do not satisfy the optimality equations", best_res);
  }
  return best;
}

Residuals residuals(const StandardFormParams& sf, double u1, double u2, double x, double y) {
  const double root_p = std::sqrt(u1 * u2);
  const double a = std::abs(sf.d);
  Residuals r;
  r.purity = x * x - y * y - 0.25;
  const double q1 = sf.b1 * u1 - x;
  const double q2 = sf.b2 * u2 - x;
  const double m1 = sf.b1 / u1 - x;
  const double m2 = sf.b2 / u2 - x;
  const double kq = sf.c * root_p - y;
  const double kp = a / root_p - y;
  r.c1 = q1 * q2 - kq * kq;
  r.c2 = m1 * m2 - kp * kp;
  r.c3 = q1 * m2 - q2 * m1;
  return r;
}

EntropyValue entropy_of_formation(double x, double tol) {
  if (!(x >= kVacuumVariance - tol)) {
    throw Error(ErrorCode::DomainError, "entropy requires x >= 1/2", x - kVacuumVariance);
  }
  if (x <= kVacuumVariance) return {0.0, 0.0};
  const double plus = x + 0.5;
  const double minus = x - 0.5;
  const double nats = plus * std::log(plus) - (minus > 0.0 ? minus * std::log(minus) : 0.0);
  return {nats, nats / std::numbers::ln2};
}

double partner_gap(const StandardFormParams& sf, ScalingFactors w, double x) {
  return partner_classicality_gap(build_scaled_cm(sf, w), build_tmsvs_cm(TmsvsParams::from_x(x)));
}

OptimalDecomposition solve_special_symmetric(const StandardFormParams& sf, double manifold_tol) {
  if (std::abs(sf.b1 - sf.b2) > manifold_tol * std::max(sf.b1, sf.b2)) {
    throw Error(ErrorCode::NotSymmetric, "b1 != b2", sf.b1 - sf.b2);
  }
  require_entangled_convention(sf);
  const double b = 0.5 * (sf.b1 + sf.b2);
  const double a = -sf.d;
  const double w = ratio_sqrt(b - a, b - sf.c);
  const double kappa = std::sqrt((b - sf.c) * (b - a));
  const double x = (kappa * kappa + 0.25) / (2.0 * kappa);
  return finish(sf, SolutionBranch::Symmetric, {w, w}, TmsvsParams::from_x(x));
}

OptimalDecomposition solve_special_squeezed_thermal(const StandardFormParams& sf, double manifold_tol) {
  if (!(sf.d < 0.0) || std::abs(sf.c + sf.d) > manifold_tol * sf.c) {
    throw Error(ErrorCode::NotSqueezedThermal, "c != |d|", sf.c + sf.d);
  }
  const double c = sf.c;
  const double s = sf.b1 + sf.b2;
  const double x =
      (s * (sf.b1 * sf.b2 - c * c + 0.25) - 2.0 * c * std::sqrt(std::max(0.0, sf.robertson()))) /
      (s * s - 4.0 * c * c);
  return finish(sf, SolutionBranch::SqueezedThermal, {1.0, 1.0}, TmsvsParams::from_x(x));
}

OptimalDecomposition solve_special_kappa_half(const StandardFormParams& sf, double manifold_tol) {
  if (std::abs(sf.robertson()) > manifold_tol) {
    throw Error(ErrorCode::NotOnKappaManifold, "state is not on the kappa_- = 1/2 manifold", sf.robertson());
  }
  require_entangled_convention(sf);
  const bool swapped = sf.b1 < sf.b2;
  StandardFormParams s = sf;
  if (swapped) std::swap(s.b1, s.b2);
  const double b1 = s.b1;
  const double b2 = s.b2;
  const double a = -s.d;
  const double g_c = b1 * b2 - s.c * s.c;
  const double g_d = b1 * b2 - a * a;

  double x = 0.0;
  ScalingFactors w;
  if (b2 * s.c - b1 * a < 0.0) {
    x = (b1 * b1 - b2 * b2) / (8.0 * (s.det_v() - 1.0 / 16.0));
    w.u1 = ratio_sqrt(b2 * g_d - 0.25 * b1, b2 * g_c - 0.25 * b1);
    w.u2 = ratio_sqrt(b1 * g_d - 0.25 * b2, b1 * g_c - 0.25 * b2);
  } else {
    x = 0.5 * std::sqrt(b1 * b2 / g_d);
    w.u1 = 2.0 * std::sqrt(b1 / b2 * g_d);
    w.u2 = 2.0 * std::sqrt(b2 / b1 * g_d);
  }
  if (swapped) std::swap(w.u1, w.u2);
  return finish(sf, SolutionBranch::KappaHalf, w, TmsvsParams::from_x(x));
}

OptimalDecomposition solve_separable(const StandardFormParams& sf, bool on_boundary) {
  OptimalDecomposition out = finish(sf, on_boundary ? SolutionBranch::Boundary : SolutionBranch::Separable,
                                    boundary_scalings(sf), TmsvsParams());
  out.ef_nats = 0.0;
  out.ef_ebits = 0.0;
  return out;
}

OptimalDecomposition solve_eof(const StandardFormParams& sf, const SolverOptions& opt) {
  require_physical(sf, opt.tol);

  const double simon = sf.simon();
  if (simon >= -opt.tol) return solve_separable(sf, std::abs(simon) <= opt.tol);

  std::string note;
  if (!opt.force_general) {
    using Special = OptimalDecomposition (*)(const StandardFormParams&, double);
    struct Route {
      bool applies;
      Special solver;
      SolutionBranch branch;
    };
    const Route routes[] = {
        {std::abs(sf.b1 - sf.b2) <= opt.manifold_tol * std::max(sf.b1, sf.b2), &solve_special_symmetric,
         SolutionBranch::Symmetric},
        {std::abs(sf.c + sf.d) <= opt.manifold_tol * sf.c, &solve_special_squeezed_thermal,
         SolutionBranch::SqueezedThermal},
        {std::abs(sf.robertson()) <= opt.manifold_tol, &solve_special_kappa_half, SolutionBranch::KappaHalf},
    };
    for (const Route& route : routes) {
      if (!route.applies) continue;
      std::string why;
      try {
        OptimalDecomposition sol = route.solver(sf, opt.manifold_tol);
        if (passes_gate(sol, sf, opt, why)) return sol;
      } catch (const Error& e) {
        why = e.what();
      }
      if (!note.empty()) note += "; ";
      note += std::string(to_string(route.branch)) + " closed form rejected: " + why;
    }
  }

  OptimalDecomposition out = solve_general(sf, opt);
  out.note = note;
  return out;
}

}  // namespace tmgs
