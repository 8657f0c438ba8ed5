#include <bem/error.hpp>
#include <bem/model.hpp>
#include <bem/numeric.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace bem;
using bem::numeric::pi;
using fixtures::central_difference;

namespace {

PolarTable constant_lift(double cl, double cd) {
  SyntheticParams p;
  p.cl_const = cl;
  p.cd0 = cd;
  p.alpha_min = -1.0;
  p.alpha_max = 1.0;
  p.beta = 0.4;
  p.alpha_s = 0.4;
  return synthetic_polar(SyntheticKind::constant, p);
}

ElementGeometry geometry(double lambda, double r, double gamma, double chord) {
  ElementGeometry g;
  g.lambda = lambda;
  g.r = r;
  g.gamma = gamma;
  g.chord = chord;
  g.blade_count = 3;
  g.tip_radius = 1.0;
  return g;
}

// Independent inversion of a/(1-a) + s psi/(1-a)^2 = rhs by bisection on a.
double axial_by_bisection(const CorrectionSpec& corr, double rhs, double s, double tip) {
  auto f = [&](double a) {
    return a / (1 - a) + s * psi(corr, a, tip) / ((1 - a) * (1 - a)) - rhs;
  };
  double lo = 0.0, hi = 1.0 - 1e-15;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

const CorrectionVariant all_variants[] = {CorrectionVariant::none, CorrectionVariant::glauert3,
                                          CorrectionVariant::glauert_empirical,
                                          CorrectionVariant::buhl, CorrectionVariant::wilson_spera};

}  // namespace

TEST(TipFactor, ReferenceValue) {
  EXPECT_NEAR(prandtl_tip_factor(3, 0.5, 0.3), 0.9960235715844389, 1e-15);
}

TEST(TipFactor, Limits) {
  EXPECT_LT(prandtl_tip_factor(3, 1.0 - 1e-12, 0.3), 1e-5);
  EXPECT_NEAR(prandtl_tip_factor(3, 1e-3, 0.3), 1.0, 1e-15);
  EXPECT_NEAR(prandtl_tip_factor(500, 0.9, 0.3), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(prandtl_tip_factor(3, 1.0, 0.3), 0.0);
}

TEST(TipFactor, DomainErrors) {
  EXPECT_THROW(prandtl_tip_factor(3, 0.5, 0.0), Error);
  EXPECT_THROW(prandtl_tip_factor(3, 1.5, 0.3), Error);
}

TEST(TipFactor, DerivativeMatchesDifferences) {
  for (double phi : {0.05, 0.3, 0.9, 1.4}) {
    for (double rr : {0.3, 0.8, 0.97}) {
      const double fd = central_difference(
          [&](double x) { return prandtl_tip_factor(3, rr, x); }, phi, 1e-6);
      EXPECT_NEAR(prandtl_tip_factor_prime(3, rr, phi), fd, 1e-7 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Psi, ZeroBelowThreshold) {
  for (auto v : all_variants) {
    auto c = CorrectionSpec::make(v, false);
    EXPECT_EQ(psi(c, 0.0), 0.0);
    EXPECT_EQ(psi(c, c.threshold()), 0.0);
    EXPECT_EQ(psi(c, 0.9 * c.threshold()), 0.0);
  }
}

TEST(Psi, WilsonSpera) {
  auto c = CorrectionSpec::make(CorrectionVariant::wilson_spera, false);
  EXPECT_DOUBLE_EQ(c.a_c, 1.0 / 3.0);
  EXPECT_NEAR(psi(c, 0.5), 1.0 / 36.0, 1e-16);
}

TEST(Psi, Buhl) {
  auto c = CorrectionSpec::make(CorrectionVariant::buhl, false);
  EXPECT_DOUBLE_EQ(c.a_c, 0.4);
  EXPECT_NEAR(psi(c, 0.7, 1.0), 0.125, 1e-15);
  EXPECT_NEAR(psi(c, 0.7, 0.5), 0.25, 1e-15);
}

TEST(Psi, GlauertCubic) {
  auto c = CorrectionSpec::make(CorrectionVariant::glauert3, false);
  const double ac = 1.0 / 3.0;
  for (double a : {0.4, 0.6, 0.9}) {
    const double x = a - ac;
    EXPECT_NEAR(psi(c, a), x / 4 * (x * x / ac + 2 * x + ac), 1e-15);
  }
}

TEST(Psi, GlauertEmpiricalReplacesThrust) {
  auto c = CorrectionSpec::make(CorrectionVariant::glauert_empirical, false);
  c.unit_tip_in_correction = false;
  const double ac = 0.4;
  for (double F : {1.0, 0.8, 0.35}) {
    for (double a : {0.45, 0.6, 0.95}) {
      const double x = a - ac;
      const double empirical = ac * (1 - ac) + x * (F * (x + 2 * ac) - 0.286) / 2.5708 * F;
      EXPECT_NEAR(a * (1 - a) + psi(c, a, F), empirical, 1e-14);
    }
  }
}

TEST(Psi, StrictModeIgnoresTipFactor) {
  auto c = CorrectionSpec::make(CorrectionVariant::glauert_empirical, true);
  ASSERT_TRUE(c.unit_tip_in_correction);
  EXPECT_DOUBLE_EQ(psi(c, 0.7, 0.3), psi(c, 0.7, 1.0));
}

TEST(Psi, DerivativesMatchDifferences) {
  for (auto v : all_variants) {
    auto c = CorrectionSpec::make(v, false);
    c.unit_tip_in_correction = false;
    for (double x : {0.05, 0.2, 0.4}) {
      for (double F : {1.0, 0.7}) {
        auto p = psi_excess(c, x, F);
        EXPECT_NEAR(p.dx, central_difference([&](double t) { return psi_excess(c, t, F).value; }, x, 1e-6), 1e-8);
        EXPECT_NEAR(p.dF, central_difference([&](double t) { return psi_excess(c, x, t).value; }, F, 1e-6), 1e-8);
      }
    }
  }
}

TEST(Correction, Defaults) {
  EXPECT_DOUBLE_EQ(default_threshold(CorrectionVariant::glauert3), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(default_threshold(CorrectionVariant::glauert_empirical), 0.4);
  EXPECT_DOUBLE_EQ(default_threshold(CorrectionVariant::buhl), 0.4);
  EXPECT_DOUBLE_EQ(default_threshold(CorrectionVariant::wilson_spera), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(CorrectionSpec::make(CorrectionVariant::none, false).threshold(), 1.0);
  EXPECT_EQ(parse_correction_variant("buhl"), CorrectionVariant::buhl);
  EXPECT_THROW(parse_correction_variant("nope"), Error);
  EXPECT_THROW(CorrectionSpec::make(CorrectionVariant::wilson_spera, false, 1.2), Error);
  EXPECT_THROW(CorrectionSpec::make(CorrectionVariant::wilson_spera, false, 0.0), Error);
}

TEST(GeometricTerm, Values) {
  EXPECT_DOUBLE_EQ(mu_G(0.7, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(mu_G(0.7, 0.0), 0.0);
  EXPECT_NEAR(mu_G(pi / 3, pi / 6), std::sin(pi / 6) * std::tan(pi / 6), 1e-15);
  EXPECT_NEAR(mu_G(pi / 3, pi / 6), 0.288675134594813, 1e-14);
  EXPECT_THROW(mu_G(0.5, 0.5 - pi / 2), Error);
}

TEST(GeometricTerm, EndpointSlopes) {
  for (double theta : {0.2, 0.7, 1.3}) {
    EXPECT_NEAR(mu_G_prime(theta, 0.0), std::tan(theta), 1e-14);
    EXPECT_NEAR(mu_G_prime(theta, theta), -std::sin(theta), 1e-14);
    EXPECT_NEAR(central_difference([&](double p) { return mu_G(theta, p); }, 0.0, 1e-6),
                std::tan(theta), 1e-6);
    EXPECT_NEAR(central_difference([&](double p) { return mu_G(theta, p); }, theta, 1e-6),
                -std::sin(theta), 1e-6);
  }
}

TEST(Element, LiftTermScalesWithSolidity) {
  auto polar = constant_lift(1.0, 0.01);
  const double r = 0.5;
  const double chord = 0.4 * 2 * pi * r / 3;
  BladeElement e(geometry(1.0, r, 0.2, chord), polar, CorrectionSpec::make(CorrectionVariant::none, false));
  EXPECT_NEAR(e.solidity(), 0.4, 1e-15);
  EXPECT_NEAR(e.mu_L(0.5), 0.1, 1e-15);
  EXPECT_NEAR(e.with_design(0.2, 2 * chord).mu_L(0.5), 0.2, 1e-15);
}

TEST(Element, SymmetricProfileHasNoLiftAtTwist) {
  auto polar = fixtures::thin_airfoil();
  BladeElement e(geometry(1.0, 0.5, 0.3, 0.1), polar, CorrectionSpec::simplified());
  EXPECT_NEAR(e.mu_L(0.3), 0.0, 1e-15);
}

TEST(Element, TipLossDividesCoefficients) {
  auto polar = fixtures::thin_airfoil();
  auto g = geometry(1.0, 0.9, 0.2, 0.1);
  BladeElement off(g, polar, CorrectionSpec::make(CorrectionVariant::none, false));
  BladeElement on(g, polar, CorrectionSpec::make(CorrectionVariant::none, true));
  for (double phi : {0.25, 0.5, 0.7}) {
    EXPECT_DOUBLE_EQ(off.mu_L_c(phi), off.mu_L(phi));
    EXPECT_DOUBLE_EQ(off.mu_D_c(phi), off.mu_D(phi));
    const double F = prandtl_tip_factor(3, 0.9, phi);
    EXPECT_NEAR(on.mu_L_c(phi), on.mu_L(phi) / F, 1e-15);
    EXPECT_NEAR(on.mu_D_c(phi), on.mu_D(phi) / F, 1e-15);
  }
}

TEST(Element, TipAtRadiusIsSingular) {
  auto polar = fixtures::thin_airfoil();
  BladeElement e(geometry(1.0, 1.0, 0.2, 0.1), polar, CorrectionSpec::make(CorrectionVariant::none, true));
  try {
    (void)e.mu_L_c(0.5);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::tip_singularity);
  }
}

TEST(Element, DragFreePolarHasNoDragTerm) {
  auto polar = fixtures::thin_airfoil(0.0, 0.0);
  BladeElement e(geometry(1.0, 0.6, 0.2, 0.1), polar, CorrectionSpec::make(CorrectionVariant::buhl, true));
  for (double phi : {0.1, 0.4, 0.7}) EXPECT_EQ(e.mu_D_c(phi), 0.0);
}

TEST(ImplicitMap, RightHandSideValues) {
  auto polar = fixtures::thin_airfoil();
  auto corr = CorrectionSpec::make(CorrectionVariant::wilson_spera, false);
  corr.drag = false;
  BladeElement e(geometry(1.0, 0.5, 0.2, 0.1), polar, corr);
  EXPECT_NEAR(e.g(e.theta()), 0.0, 1e-15);
  EXPECT_NEAR(e.g(pi / 8), 1.0, 1e-14);
  EXPECT_THROW(e.g(0.0), Error);
  EXPECT_THROW(e.g(e.theta() + 1e-3), Error);

  BladeElement drag(geometry(1.0, 0.5, 0.2, 0.1), polar, CorrectionSpec::make(CorrectionVariant::wilson_spera, false));
  EXPECT_GT(drag.g(1e-6), 1e8);
  EXPECT_GT(drag.g(1e-7), 10 * drag.g(1e-6));
}

TEST(ImplicitMap, AxialSolveBasics) {
  auto none = CorrectionSpec::make(CorrectionVariant::none, false);
  EXPECT_EQ(solve_axial(none, 0.0, 1.0, 1.0)->a, 0.0);
  EXPECT_NEAR(solve_axial(none, 0.25, 1.0, 1.0)->a, 0.2, 1e-16);
  EXPECT_NEAR(solve_axial(none, 0.25, 1.0, 1.0)->a, axial_by_bisection(none, 0.25, 1.0, 1.0), 1e-14);
  EXPECT_FALSE(solve_axial(none, -1.0, 1.0, 1.0).has_value());
}

TEST(ImplicitMap, AxialSolveMatchesBisectionForEveryVariant) {
  for (auto v : all_variants) {
    auto c = CorrectionSpec::make(v, false);
    c.unit_tip_in_correction = false;
    for (double rhs : {0.1, 0.5, 1.0, 3.0, 40.0, 1e4}) {
      for (double s : {0.01, 0.3, 1.0}) {
        for (double F : {1.0, 0.6}) {
          auto got = solve_axial(c, rhs, s, F);
          ASSERT_TRUE(got.has_value());
          EXPECT_NEAR(got->a, axial_by_bisection(c, rhs, s, F), 1e-12)
              << to_string(v) << " rhs=" << rhs << " s=" << s;
          EXPECT_NEAR(got->a + got->one_minus_a, 1.0, 1e-15);
        }
      }
    }
  }
}

TEST(ImplicitMap, DerivativeMatchesDifferences) {
  auto polar = fixtures::thin_airfoil();
  auto t = fixtures::small_rotor();
  for (auto v : all_variants) {
    for (bool tip : {false, true}) {
      auto c = CorrectionSpec::make(v, tip);
      c.unit_tip_in_correction = false;
      auto e = fixtures::element_at(t, polar, 1.2, c);
      for (double frac : {0.1, 0.35, 0.6, 0.9}) {
        const double phi = frac * e.theta();
        const double fd = central_difference([&](double x) { return e.tau(x).a; }, phi, 1e-7);
        EXPECT_NEAR(e.tau_prime(phi), fd, 1e-6 * std::max(1.0, std::abs(fd)))
            << to_string(v) << " tip=" << tip << " phi=" << phi;
      }
    }
  }
}

TEST(ImplicitMap, ComplementDecaysWithDrag) {
  auto polar = fixtures::thin_airfoil(0.05, 0.0);
  auto t = fixtures::small_rotor();
  auto e = fixtures::element_at(t, polar, 1.0, CorrectionSpec::make(CorrectionVariant::wilson_spera, false));
  std::vector<double> phis, gaps;
  for (double x : numeric::linspace(std::log(1e-6), std::log(1e-4), 25)) {
    phis.push_back(std::exp(x));
    gaps.push_back(e.tau(phis.back()).one_minus_a);
  }
  EXPECT_NEAR(fixtures::loglog_slope(phis, gaps), 1.5, 0.05);
  // Leading coefficient sqrt(psi(1 - a_c) / mu_D(0)).
  const double lead = std::sqrt(std::pow(2.0 / 3.0, 2) / e.mu_D_c(1e-9));
  EXPECT_NEAR(e.tau(1e-9).one_minus_a / std::pow(1e-9, 1.5), lead, 1e-2 * lead);
}

TEST(ImplicitMap, ComplementIsLinearWithoutDrag) {
  auto polar = fixtures::thin_airfoil();
  auto t = fixtures::small_rotor();
  auto corr = CorrectionSpec::make(CorrectionVariant::wilson_spera, false);
  corr.drag = false;
  auto e = fixtures::element_at(t, polar, 1.0, corr);
  std::vector<double> phis, gaps;
  for (double x : numeric::linspace(std::log(1e-6), std::log(1e-4), 25)) {
    phis.push_back(std::exp(x));
    gaps.push_back(e.tau(phis.back()).one_minus_a);
  }
  // 1 - a ~ k phi with k tan(theta) = (1 + sqrt(1 + 4 tan^2(theta) psi(1 - a_c))) / 2.
  EXPECT_NEAR(fixtures::loglog_slope(phis, gaps), 1.0, 0.05);
  const double tt = std::tan(e.theta());
  const double k = (1 + std::sqrt(1 + 4 * tt * tt * 4.0 / 9.0)) / (2 * tt);
  EXPECT_NEAR(gaps.front() / phis.front(), k, 1e-3 * k);
}

TEST(CorrectedGeometricTerm, EqualsPlainTermWhenInactive) {
  auto polar = fixtures::thin_airfoil();
  auto t = fixtures::small_rotor();
  auto none = fixtures::element_at(t, polar, 1.0, CorrectionSpec::make(CorrectionVariant::none, true));
  auto ws = fixtures::element_at(t, polar, 1.0, CorrectionSpec::make(CorrectionVariant::wilson_spera, true));
  for (double frac : {0.05, 0.3, 0.7, 1.0}) {
    const double phi = frac * none.theta();
    EXPECT_DOUBLE_EQ(none.mu_G_c(phi), mu_G(none.theta(), phi));
    if (ws.tau(phi).a <= ws.correction().a_c) {
      EXPECT_DOUBLE_EQ(ws.mu_G_c(phi), mu_G(ws.theta(), phi));
    }
  }
}

TEST(CorrectedGeometricTerm, BlowsUpLikeDragOverAngle) {
  auto polar = fixtures::thin_airfoil(0.05, 0.0);
  auto t = fixtures::small_rotor();
  auto e = fixtures::element_at(t, polar, 1.0, CorrectionSpec::make(CorrectionVariant::wilson_spera, false));
  const double phi = 1e-9;
  EXPECT_NEAR(e.mu_G_c(phi) * phi / e.mu_D_c(phi), 1.0, 3e-3);
}

TEST(Residual, ReducesToPlainModel) {
  auto polar = fixtures::thin_airfoil();
  BladeElement e(geometry(0.8, 0.4, 0.25, 0.12), polar, CorrectionSpec::simplified());
  auto range = e.evaluation_range();
  for (double phi : numeric::linspace(range.lo, range.hi, 57)) {
    EXPECT_NEAR(e.residual(phi), e.mu_L(phi) - mu_G(e.theta(), phi), 1e-14);
  }
}

TEST(Residual, SignsAtTwistAndTheta) {
  auto polar = fixtures::thin_airfoil();
  BladeElement e(geometry(0.8, 0.4, 0.25, 0.12), polar, CorrectionSpec::simplified());
  EXPECT_NEAR(e.residual(0.25), -mu_G(e.theta(), 0.25), 1e-15);
  EXPECT_LT(e.residual(0.25), 0.0);
  EXPECT_NEAR(e.residual(e.theta()), e.mu_L(e.theta()), 1e-15);
  EXPECT_GT(e.residual(e.theta()), 0.0);
}

TEST(Residual, DerivativeMatchesDifferences) {
  auto polar = fixtures::thin_airfoil();
  auto t = fixtures::small_rotor();
  for (auto v : all_variants) {
    for (bool tip : {false, true}) {
      auto c = CorrectionSpec::make(v, tip);
      for (double lambda : {0.5, 1.75}) {
        auto e = fixtures::element_at(t, polar, lambda, c);
        for (double frac : {0.15, 0.45, 0.8}) {
          const double phi = frac * e.theta();
          const double fd = central_difference([&](double x) { return e.residual(x); }, phi, 1e-7);
          EXPECT_NEAR(e.residual_prime(phi), fd, 1e-6 * std::max(1.0, std::abs(fd)))
              << to_string(v) << " tip=" << tip << " lambda=" << lambda;
        }
      }
    }
  }
}

TEST(Recovery, SimplifiedRootSatisfiesOriginalEquations) {
  auto polar = fixtures::thin_airfoil();
  BladeElement e(geometry(0.8, 0.4, 0.25, 0.12), polar, CorrectionSpec::simplified());
  auto r = numeric::bisect([&](double p) { return e.residual(p); }, 0.25, e.theta(), 0.0);
  auto s = e.recover_induction(r.root);
  EXPECT_NEAR(std::tan(s.phi) * 0.8 * (1 + s.a_prime), 1 - s.a, 1e-9);
  EXPECT_LT(e.original_equations(s.phi, s.a, s.a_prime).max_abs(), 1e-12);
  // Drag-free angular balance (1 - a) mu_L / (lambda sin phi).
  EXPECT_NEAR(s.a_prime, (1 - s.a) * e.mu_L(s.phi) / (0.8 * std::sin(s.phi)), 1e-14);
}

TEST(Recovery, ZeroLiftAtThetaGivesZeroInduction) {
  auto polar = fixtures::thin_airfoil();
  const double theta = std::atan(1.0 / 0.8);
  BladeElement e(geometry(0.8, 0.4, theta, 0.12), polar, CorrectionSpec::simplified());
  auto s = e.recover_induction(theta);
  EXPECT_NEAR(s.a, 0.0, 1e-15);
  EXPECT_NEAR(s.a_prime, 0.0, 1e-15);
}

TEST(Loads, ThrustCoefficient) {
  auto polar = fixtures::thin_airfoil();
  auto t = fixtures::small_rotor();
  BladeElement e(ElementGeometry::place(t, 1.0, 0.2, 0.1), polar, CorrectionSpec::make(CorrectionVariant::none, false));
  FlowState s;
  s.phi = 0.4;
  s.tip_factor = 1.0;
  s.a = 0.0;
  auto l0 = loads_diagnostics(t, e, s);
  EXPECT_EQ(l0.thrust_coefficient, 0.0);
  EXPECT_EQ(l0.thrust_per_span, 0.0);
  s.a = 1.0 / 3.0;
  EXPECT_NEAR(loads_diagnostics(t, e, s).thrust_coefficient, 8.0 / 9.0, 1e-15);
  s.a = 0.5;
  s.tip_factor = 0.7;
  EXPECT_NEAR(loads_diagnostics(t, e, s).thrust_coefficient, 0.7, 1e-15);
  EXPECT_NEAR(loads_diagnostics(t, e, s).axial_velocity, 5.0, 1e-15);
}

TEST(Validation, TurbineAndGeometry) {
  auto t = fixtures::small_rotor();
  EXPECT_NO_THROW(t.validate());
  t.lambda_max = 3.0;  // r(3) = 1.5 m > R
  EXPECT_THROW(t.validate(), Error);
  t = fixtures::small_rotor();
  t.blade_count = 0;
  EXPECT_THROW(t.validate(), Error);
  auto g = geometry(1.0, 0.5, 0.2, -0.1);
  EXPECT_THROW(g.validate(), Error);
}

// Properties

TEST(ModelProperty, ImplicitMapRangeAndConsistency) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  int checked = 0;
  while (checked < 1000) {
    auto v = all_variants[static_cast<std::size_t>(u(rng) * 5) % 5];
    auto c = CorrectionSpec::make(v, u(rng) < 0.5);
    c.drag = u(rng) < 0.8;
    ElementGeometry g = geometry(0.2 + 2.5 * u(rng), 0.05 + 0.9 * u(rng), 0.4 * u(rng) - 0.1,
                                 0.01 + 0.5 * u(rng));
    BladeElement e(g, polar, c);
    auto range = e.evaluation_range();
    range.hi = std::min(range.hi, e.theta());
    if (range.empty()) continue;
    const double phi = range.lo + (range.hi - range.lo) * u(rng);
    if (phi <= 0) continue;
    auto t = e.tau(phi);
    ASSERT_GE(t.a, 0.0);
    ASSERT_LT(t.a, 1.0);
    const double s = std::sin(e.theta()) * std::sin(phi) / std::cos(e.theta() - phi);
    const double lhs = t.a / t.one_minus_a +
                       s * psi(c, t.a, e.psi_tip_factor(phi)) / (t.one_minus_a * t.one_minus_a);
    EXPECT_NEAR(lhs, e.g(phi), 1e-10 * std::max(1.0, e.g(phi)));
    ++checked;
  }
}

TEST(ModelProperty, ImplicitMapDecreasesWhereRightHandSideDoes) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto t = fixtures::small_rotor();
  for (auto v : all_variants) {
    for (double lambda : {0.4, 1.0, 1.9}) {
      auto e = fixtures::element_at(t, polar, lambda, CorrectionSpec::make(v, false));
      auto grid = numeric::linspace(1e-3 * e.theta(), e.theta(), 400);
      bool g_decreasing = true;
      for (std::size_t i = 1; i < grid.size(); ++i) g_decreasing &= e.g(grid[i]) <= e.g(grid[i - 1]);
      if (!g_decreasing) continue;
      for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LE(e.tau(grid[i]).a, e.tau(grid[i - 1]).a);
    }
  }
}

TEST(ModelProperty, RootsSolveTheOriginalSystem) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto t = fixtures::small_rotor();
  for (auto v : all_variants) {
    for (bool tip : {false, true}) {
      for (double lambda : {0.3, 0.9, 1.6}) {
        auto e = fixtures::element_at(t, polar, lambda, CorrectionSpec::make(v, tip));
        auto range = e.evaluation_range();
        auto grid = numeric::linspace(std::max(range.lo, 1e-6), range.hi, 300);
        for (std::size_t i = 1; i < grid.size(); ++i) {
          const double r0 = e.residual(grid[i - 1]), r1 = e.residual(grid[i]);
          if ((r0 < 0) == (r1 < 0)) continue;
          auto root = numeric::bisect([&](double p) { return e.residual(p); }, grid[i - 1], grid[i], 0.0);
          auto s = e.recover_induction(root.root);
          EXPECT_LT(e.original_equations(s.phi, s.a, s.a_prime).max_abs(), 1e-8)
              << to_string(v) << " tip=" << tip << " lambda=" << lambda;
        }
      }
    }
  }
}
