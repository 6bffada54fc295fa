#include <doctest.h>

#include <cmath>

#include "states.hpp"
#include "tmgs/eof_solver.hpp"
#include "tmgs/error.hpp"

using namespace tmgs;
using tmgs::testing::Sampler;

namespace {

const StandardFormParams kSym{1.0, 1.0, 0.8, -0.6};
const StandardFormParams kThermalSq{1.2, 1.0, 0.8, -0.8};

// Frozen from a direct evaluation of the coefficient formulas.
constexpr double kSymA[5] = {0.097344, -0.103272, -0.026732, 0.018304, 0.004356};
constexpr double kSymX = 0.58336309447890178;
constexpr double kSymEfNats = 0.29386481838827161;
constexpr double kSymEfEbits = 0.42395731618049531;
constexpr double kThermalX = 0.575664550861;
constexpr double kThermalEfNats = 0.27378144;

double coefficient_scale(const StandardFormParams& sf) {
  double m = 0.0;
  for (double a : quartic_coefficients(sf)) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace

TEST_CASE("quartic coefficients of the symmetric example") {
  const auto a = quartic_coefficients(kSym);
  for (int n = 0; n < 5; ++n) CHECK(a[n] == doctest::Approx(kSymA[n]).epsilon(1e-12));
  CHECK(a[0] == doctest::Approx(0.64 * 0.39 * 0.39));
  CHECK(a[4] == doctest::Approx(0.36 * 0.11 * 0.11));
}

TEST_CASE("quartic coefficient signs and the c = |d| symmetry") {
  Sampler s(21);
  for (int i = 0; i < 500; ++i) {
    const StandardFormParams sf = testing::random_entangled(s);
    const auto a = quartic_coefficients(sf);
    CHECK(a[0] > 0.0);
    CHECK(a[1] <= 0.0);
    CHECK(a[4] >= 0.0);
    // exchanging c and |d| is the identity here, so A3 = A1 and A4 = A0
    const StandardFormParams st = testing::random_squeezed_thermal(s);
    const auto b = quartic_coefficients(st);
    const double scale = coefficient_scale(st);
    CHECK(std::abs(b[3] - b[1]) <= 1e-12 * scale);
    CHECK(std::abs(b[4] - b[0]) <= 1e-12 * scale);
  }
}

TEST_CASE("quartic convention violations") {
  CHECK_THROWS_AS(quartic_coefficients({1.0, 1.0, 0.8, 0.6}), Error);
  CHECK_THROWS_AS(quartic_coefficients({1.0, 1.0, 0.5, -0.6}), Error);
}

TEST_CASE("quartic_at examples") {
  CHECK(std::abs(quartic_at(kSym, 2.0)) <= 1e-12 * coefficient_scale(kSym));
  CHECK(std::abs(quartic_at(kThermalSq, 1.0)) <= 1e-12 * coefficient_scale(kThermalSq));
  CHECK(quartic_at(kSym, 1.0) < 0.0);
}

TEST_CASE("trinomial at the boundary") {
  const auto b = y_trinomial({1.0, 1.0, 0.5, -0.5}, 1.0);
  CHECK(std::abs(b[0]) < 1e-15);
}

TEST_CASE("property: trinomial signs") {
  Sampler s(22);
  for (int i = 0; i < 1000; ++i) {
    const StandardFormParams sf = testing::random_entangled(s);
    const double p = s.uniform(1.0, 10.0);
    const auto b = y_trinomial(sf, p);
    CHECK(b[0] == doctest::Approx(-sf.simon() * p));
    CHECK(b[0] >= 0.0);
    CHECK(b[1] < 0.0);
    CHECK(b[2] > 0.0);
  }
}

TEST_CASE("recover_scalings examples") {
  const double y = std::sqrt(kSymX * kSymX - 0.25);
  const ScalingFactors w = recover_scalings(kSym, 2.0, kSymX, y);
  CHECK(w.u1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(w.u2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

  const ScalingFactors t =
      recover_scalings(kThermalSq, 1.0, testing::squeezed_thermal_x(kThermalSq),
                       std::sqrt(std::pow(testing::squeezed_thermal_x(kThermalSq), 2) - 0.25));
  CHECK(t.u1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(t.u2 == doctest::Approx(1.0).epsilon(1e-10));

  const double x0 = 1.3, y0 = std::sqrt(x0 * x0 - 0.25);
  const ScalingFactors pure = recover_scalings({x0, x0, y0, -y0}, 1.0, x0, y0);
  CHECK(pure.u1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pure.u2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("residuals examples") {
  const double w = std::sqrt(2.0);
  const double y = std::sqrt(kSymX * kSymX - 0.25);
  CHECK(residuals(kSym, w, w, kSymX, y).max_abs() <= 1e-10);
  const Residuals off = residuals(kSym, w, w, kSymX + 1e-3, y);
  CHECK(off.purity == doctest::Approx(2.0 * kSymX * 1e-3).epsilon(1e-3));
  CHECK(residuals({1.0, 1.0, 0.5, -0.5}, 1.0, 1.0, 0.5, 0.0).max_abs() == 0.0);
}

TEST_CASE("entropy of formation") {
  CHECK(entropy_of_formation(0.5).nats == 0.0);
  CHECK(entropy_of_formation(0.5).ebits == 0.0);
  const EntropyValue two = entropy_of_formation(1.5);
  CHECK(two.nats == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(two.ebits == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(entropy_of_formation(kSymX).nats == doctest::Approx(0.29386).epsilon(1e-4));
  try {
    entropy_of_formation(0.4);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
}

TEST_CASE("property: entropy increases and is concave") {
  double prev = 0.0, prev_slope = INFINITY;
  for (int i = 1; i <= 2000; ++i) {
    const double x = 0.5 + 9.5 * i / 2000.0;
    const double e = entropy_of_formation(x).nats;
    const double slope = (e - prev) / (9.5 / 2000.0);
    CHECK(e > prev);
    if (i > 1) CHECK(slope < prev_slope);
    prev = e;
    prev_slope = slope;
  }
}

TEST_CASE("solve_eof: symmetric example") {
  const OptimalDecomposition d = solve_eof(kSym);
  CHECK(d.branch == SolutionBranch::Symmetric);
  CHECK(d.p_m == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(d.w.u1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(d.w.u2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(d.tmsvs.x() == doctest::Approx(kSymX).epsilon(1e-12));
  CHECK(d.ef_nats == doctest::Approx(kSymEfNats).epsilon(1e-12));
  CHECK(d.ef_ebits == doctest::Approx(kSymEfEbits).epsilon(1e-12));
  CHECK(d.ef_ebits == doctest::Approx(0.42396).epsilon(1e-5));
  CHECK(d.residuals.max_abs() <= 1e-9);

  SolverOptions forced;
  forced.force_general = true;
  const OptimalDecomposition g = solve_eof(kSym, forced);
  CHECK(g.branch == SolutionBranch::GeneralQuartic);
  CHECK(g.p_m == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(g.tmsvs.x() == doctest::Approx(kSymX).epsilon(1e-8));
  CHECK(g.ef_nats == doctest::Approx(kSymEfNats).epsilon(1e-8));
  CHECK(g.feasible_count >= 1);
}

TEST_CASE("solve_eof: squeezed-thermal example") {
  const OptimalDecomposition d = solve_eof(kThermalSq);
  CHECK(d.branch == SolutionBranch::SqueezedThermal);
  CHECK(d.w.u1 == doctest::Approx(1.0));
  CHECK(d.w.u2 == doctest::Approx(1.0));
  CHECK(d.tmsvs.x() == doctest::Approx(kThermalX).epsilon(1e-11));
  CHECK(d.tmsvs.x() == doctest::Approx((2.2 * (0.56 + 0.25) - 1.6 * std::sqrt(0.0861)) / 2.28).epsilon(1e-12));
  CHECK(d.ef_nats == doctest::Approx(kThermalEfNats).epsilon(1e-7));
  CHECK(kThermalSq.robertson() == doctest::Approx(0.0861));

  SolverOptions forced;
  forced.force_general = true;
  CHECK(solve_eof(kThermalSq, forced).ef_nats == doctest::Approx(d.ef_nats).epsilon(1e-8));
}

TEST_CASE("solve_eof: boundary example") {
  const OptimalDecomposition d = solve_eof({1.0, 1.0, 0.5, -0.5});
  CHECK(d.branch == SolutionBranch::Boundary);
  CHECK(d.ef_nats == 0.0);
  CHECK(d.tmsvs.x() == 0.5);
  CHECK(d.tmsvs.y() == 0.0);
  CHECK(d.w.u1 == doctest::Approx(1.0));
  CHECK(d.w.u2 == doctest::Approx(1.0));
}

TEST_CASE("solve_eof: separable and unphysical input") {
  const OptimalDecomposition d = solve_eof({1.0, 1.0, 0.3, 0.2});
  CHECK(d.ef_nats == 0.0);
  CHECK(d.branch == SolutionBranch::Separable);
  try {
    solve_eof({0.45, 1.0, 0.1, -0.1});
    FAIL("expected Unphysical");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unphysical);
  }
}

TEST_CASE("symmetric closed form at several scales") {
  for (double b : {1.0, 1.5, 2.0}) {
    const StandardFormParams sf{b, b, 0.8 * b, -0.6 * b};
    if (!testing::entangled(sf)) continue;
    const OptimalDecomposition d = solve_special_symmetric(sf);
    CHECK(d.tmsvs.x() == doctest::Approx(testing::symmetric_x(sf)).epsilon(1e-12));
    CHECK(d.w.u1 == doctest::Approx(testing::symmetric_w(sf)).epsilon(1e-12));
    SolverOptions forced;
    forced.force_general = true;
    CHECK(solve_eof(sf, forced).ef_nats == doctest::Approx(d.ef_nats).epsilon(1e-8));
  }
  CHECK_THROWS_AS(solve_special_symmetric(kThermalSq), Error);
}

TEST_CASE("squeezed-thermal and symmetric overlap") {
  const StandardFormParams sf{1.2, 1.2, 0.9, -0.9};
  CHECK(solve_special_squeezed_thermal(sf).tmsvs.x() ==
        doctest::Approx(solve_special_symmetric(sf).tmsvs.x()).epsilon(1e-10));
  CHECK_THROWS_AS(solve_special_squeezed_thermal(kSym), Error);
}

TEST_CASE("kappa-half closed forms") {
  CHECK_THROWS_AS(solve_special_kappa_half(kSym), Error);

  // b1 = b2 on D = 0 reduces to the symmetric case
  std::optional<StandardFormParams> sym;
  for (double c = 0.05; !sym && c < 1.3; c += 0.05) sym = testing::kappa_half_state(1.3, 1.3, c);
  REQUIRE(sym);
  CHECK(solve_special_kappa_half(*sym).tmsvs.x() ==
        doctest::Approx(solve_special_symmetric(*sym).tmsvs.x()).epsilon(1e-9));

  Sampler s(23);
  int positive = 0;
  for (int i = 0; i < 400 && positive < 20; ++i) {
    const double b1 = s.uniform(0.6, 3.0), b2 = s.uniform(0.6, b1);
    const auto sf = testing::kappa_half_state(b1, b2, s.uniform(0.0, std::sqrt(b1 * b2)));
    if (!sf) continue;
    const testing::KappaHalfForm f = testing::kappa_half_form(*sf);
    if (f.negative_branch) continue;
    ++positive;
    const OptimalDecomposition d = solve_eof(*sf);
    CHECK(d.tmsvs.x() == doctest::Approx(f.x).epsilon(1e-8));
    CHECK(d.residuals.max_abs() <= 1e-9);
  }
  CHECK(positive >= 10);
}

TEST_CASE("pure-state limit") {
  for (double x : {0.6, 1.0, 1.5, 5.0}) {
    const double y = std::sqrt(x * x - 0.25);
    const OptimalDecomposition d = solve_eof({x, x, y, -y});
    CHECK(d.p_m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.w.u1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.tmsvs.x() == doctest::Approx(x).epsilon(1e-12));
    CHECK(d.ef_nats == doctest::Approx(testing::entropy_nats(x)).epsilon(1e-12));
  }
}

TEST_CASE("property: general path on random entangled states") {
  Sampler s(24);
  for (int i = 0; i < 300; ++i) {
    const StandardFormParams sf = testing::random_entangled(s);
    const OptimalDecomposition d = solve_eof(sf);
    INFO("state " << i << " b1=" << sf.b1 << " b2=" << sf.b2 << " c=" << sf.c << " d=" << sf.d);
    CHECK(d.residuals.max_abs() <= 1e-9);
    CHECK(d.p_m >= 1.0 - 1e-9);
    CHECK(d.p_m == doctest::Approx(d.w.u1 * d.w.u2).epsilon(1e-10));
    CHECK(d.ef_ebits == doctest::Approx(d.ef_nats / std::log(2.0)).epsilon(1e-14));
    CHECK(d.ef_nats > 0.0);
    CHECK(partner_gap(sf, d.w, d.tmsvs.x()) >= -1e-9);
    CHECK(quartic_at(sf, 1.0) < 0.0);
  }
}

TEST_CASE("property: local scaling invariance") {
  Sampler s(25);
  for (int i = 0; i < 100; ++i) {
    const StandardFormParams sf = testing::random_entangled(s);
    const ScalingFactors u{std::exp(s.uniform(-1.0, 1.0)), std::exp(s.uniform(-1.0, 1.0))};
    const double a = solve_eof(sf).ef_nats;
    const double b = solve_eof(reduce_to_standard_form(build_scaled_cm(sf, u))).ef_nats;
    CHECK(std::abs(a - b) <= 1e-9);
  }
}

TEST_CASE("TmsvsParams keeps purity") {
  const TmsvsParams t = TmsvsParams::from_y(0.7);
  CHECK(t.x() * t.x() - t.y() * t.y() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(TmsvsParams::from_x(0.3), Error);
}

TEST_CASE("property: general path just off the special manifolds") {
  Sampler s(26);
  SolverOptions forced;
  forced.force_general = true;
  for (double delta : {1e-12, 1e-10, 1e-9}) {
    for (int i = 0; i < 200; ++i) {
      StandardFormParams st = testing::random_squeezed_thermal(s);
      st.d = -st.c * (1.0 - delta);
      if (testing::physical(st) && testing::entangled(st)) {
        INFO("near c=|d|, delta " << delta << " b1=" << st.b1 << " b2=" << st.b2 << " c=" << st.c);
        const OptimalDecomposition d = solve_eof(st, forced);
        CHECK(d.residuals.max_abs() <= 1e-9);
        CHECK(std::abs(d.ef_nats - testing::entropy_nats(testing::squeezed_thermal_x(st))) <= 1e-6);
      }
      StandardFormParams sym = testing::random_symmetric(s);
      sym.b2 = sym.b1 * (1.0 + delta);
      if (testing::physical(sym) && testing::entangled(sym)) {
        INFO("near b1=b2, delta " << delta << " b=" << sym.b1 << " c=" << sym.c << " d=" << sym.d);
        const OptimalDecomposition d = solve_eof(sym, forced);
        CHECK(d.residuals.max_abs() <= 1e-9);
        CHECK(std::abs(d.ef_nats - testing::entropy_nats(testing::symmetric_x(sym))) <= 1e-6);
      }
    }
  }
}
