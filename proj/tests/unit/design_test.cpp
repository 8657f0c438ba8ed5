#include <bem/design.hpp>
#include <bem/error.hpp>
#include <bem/numeric.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace bem;
using bem::numeric::pi;

namespace {

double power_shape(double theta, double phi) {
  return std::sin(phi) * std::sin(phi) * std::sin(2 * (theta - phi));
}

double power_shape_prime(double theta, double phi) {
  return 2 * std::sin(phi) * std::cos(phi) * std::sin(2 * (theta - phi)) -
         2 * std::sin(phi) * std::sin(phi) * std::cos(2 * (theta - phi));
}

// Ternary search, independent of the library's golden-section routine.
double ternary_argmax(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 300; ++i) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    (f(m1) < f(m2) ? lo : hi) = f(m1) < f(m2) ? m1 : m2;
  }
  return 0.5 * (lo + hi);
}

struct RelError {
  double gamma = 0.0;
  double chord = 0.0;
};

RelError adjoint_vs_differences(const BladeElement& e, AdjointForm form = AdjointForm::consistent) {
  const auto adj = assemble_adjoint(e, operating_point(e), form);
  const double g = e.geometry().gamma, c = e.geometry().chord, h = 1e-6;
  auto J = [&](double gg, double cc) {
    auto el = e.with_design(gg, cc);
    return J_lambda(el, operating_point(el));
  };
  const double dg = (J(g + h, c) - J(g - h, c)) / (2 * h);
  const double dc = (J(g, c + h) - J(g, c - h)) / (2 * h);
  auto rel = [](double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-8); };
  return {rel(adj.grad[0], dg), rel(adj.grad[1], dc)};
}

}  // namespace

TEST(ClosedForms, AtTheta) {
  auto f = simplified_closed_forms(0.7, 0.7);
  EXPECT_NEAR(f.a, 0.0, 1e-16);
  EXPECT_NEAR(f.a_prime, 0.0, 1e-16);
  EXPECT_NEAR(f.J, 0.0, 1e-16);
}

TEST(ClosedForms, QuarterPi) {
  const double theta = pi / 4, phi = pi / 6;
  auto f = simplified_closed_forms(theta, phi);
  // Drag-free balances with the lift term replaced by sin(phi) tan(theta - phi).
  const double lambda = 1.0 / std::tan(theta);
  const double m = mu_G(theta, phi);
  const double ratio = m * std::cos(phi) / (std::sin(phi) * std::sin(phi));
  const double a = ratio / (1 + ratio);
  const double ap = (1 - a) * m / (lambda * std::sin(phi));
  EXPECT_NEAR(f.a, a, 1e-15);
  EXPECT_NEAR(f.a_prime, ap, 1e-15);
  EXPECT_NEAR(f.J, ap * (1 - a), 1e-15);
  EXPECT_NEAR(f.a, 0.316987, 1e-6);
  EXPECT_NEAR(f.a_prime, 0.183013, 1e-6);
  EXPECT_NEAR(f.J, 0.125, 1e-15);
}

TEST(ClosedForms, SmallAngleLimit) {
  const double theta = 1e-3;
  EXPECT_NEAR(simplified_closed_forms(theta, 2 * theta / 3).a, 1.0 / 3.0, 1e-3);
}

TEST(ClosedForms, DomainErrors) {
  EXPECT_THROW(simplified_closed_forms(0.5, 0.6), Error);
  EXPECT_THROW(simplified_closed_forms(0.5, 0.0), Error);
  EXPECT_THROW(simplified_closed_forms(1.6, 0.5), Error);
}

TEST(SimplifiedOptimum, AngleTwistChord) {
  auto polar = fixtures::thin_airfoil();
  auto t = fixtures::small_rotor();
  const double lambda = 1.0 / std::tan(0.6);
  auto d = simplified_optimum(lambda, polar, t);
  EXPECT_NEAR(d.phi_opt, 0.4, 1e-15);
  const double abar = best_glide_angle(polar);
  EXPECT_NEAR(d.gamma, 0.4 - abar, 1e-15);
  const double r = t.radius_at(lambda);
  EXPECT_NEAR(d.chord, 8 * pi * r * mu_G(0.6, 0.4) / (3 * polar.cl(abar)), 1e-14);
  EXPECT_NEAR(d.J, simplified_closed_forms(0.6, 0.4).J, 1e-15);
}

TEST(SimplifiedOptimum, MatchesNumericalMaximum) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> th(0.05, 1.5);
  for (int i = 0; i < 50; ++i) {
    const double theta = th(rng);
    const double best = ternary_argmax([&](double p) { return power_shape(theta, p); }, 0.0, theta);
    EXPECT_NEAR(best, 2 * theta / 3, 1e-8);
    EXPECT_NEAR(power_shape_prime(theta, 2 * theta / 3), 0.0, 1e-9);
  }
}

TEST(PowerDensity, DragFreeValue) {
  auto polar = fixtures::thin_airfoil();
  auto t = fixtures::small_rotor();
  auto e = fixtures::element_at(t, polar, 1.0, CorrectionSpec::simplified());
  auto s = operating_point(e);
  EXPECT_NEAR(J_lambda(e, s), s.a_prime * (1 - s.a), 1e-16);
  // The simplified optimum operates at 2 theta / 3 with the closed-form density.
  EXPECT_NEAR(s.phi, pi / 6, 1e-12);
  EXPECT_NEAR(J_lambda(e, s), 0.125, 1e-12);
  s.a_prime = 0.0;
  EXPECT_EQ(J_lambda(e, s), 0.0);
}

TEST(PowerDensity, ZeroLiftWithDragIsInvalid) {
  auto polar = fixtures::thin_airfoil();
  ElementGeometry g = ElementGeometry::place(fixtures::small_rotor(), 1.0, pi / 4, 0.1);
  BladeElement e(g, polar, CorrectionSpec::make(CorrectionVariant::none, false));
  FlowState s = e.recover_induction(pi / 4);
  try {
    (void)J_lambda(e, s);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::invalid_design);
  }
}

TEST(Adjoint, MatrixEntriesWithoutCorrection) {
  auto polar = fixtures::thin_airfoil();
  auto corr = CorrectionSpec::make(CorrectionVariant::wilson_spera, false);
  corr.drag = false;
  auto e = fixtures::element_at(fixtures::small_rotor(), polar, 1.0, corr);
  auto s = operating_point(e);
  ASSERT_LT(s.a, 1.0 / 3.0);
  auto adj = assemble_adjoint(e, s);
  const double nu = 1 - s.a;
  EXPECT_NEAR(adj.M[1][1], 1 / (nu * nu), 1e-14);
  EXPECT_NEAR(adj.M[1][2], s.a_prime / (nu * nu), 1e-14);
  EXPECT_NEAR(adj.M[2][2], 1 / nu, 1e-14);
  EXPECT_LT(adj.solve_residual, 1e-10);
}

TEST(Adjoint, RightHandSideVanishesWithoutSwirl) {
  auto polar = fixtures::thin_airfoil();
  auto e = fixtures::element_at(fixtures::small_rotor(), polar, 1.0,
                                CorrectionSpec::make(CorrectionVariant::wilson_spera, true));
  auto s = operating_point(e);
  s.a_prime = 0.0;
  auto adj = assemble_adjoint(e, s);
  EXPECT_EQ(adj.b[1], 0.0);
}

TEST(Adjoint, MatchesFiniteDifferences) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto t = fixtures::small_rotor();
  for (auto v : {CorrectionVariant::none, CorrectionVariant::wilson_spera, CorrectionVariant::buhl,
                 CorrectionVariant::glauert3, CorrectionVariant::glauert_empirical}) {
    for (bool tip : {false, true}) {
      for (double lambda : {0.5, 1.0, 1.75}) {
        auto e = fixtures::element_at(t, polar, lambda, CorrectionSpec::make(v, tip));
        auto s = operating_point(e);
        if (std::abs(s.a - e.correction().threshold()) < 1e-3) continue;
        auto err = adjoint_vs_differences(e);
        EXPECT_LE(err.gamma, 1e-5) << to_string(v) << " tip=" << tip << " lambda=" << lambda;
        EXPECT_LE(err.chord, 1e-5) << to_string(v) << " tip=" << tip << " lambda=" << lambda;
      }
    }
  }
}

TEST(Adjoint, ExpandedFormIsReportedSeparately) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto e = fixtures::element_at(fixtures::small_rotor(), polar, 1.0,
                                CorrectionSpec::make(CorrectionVariant::wilson_spera, true));
  auto s = operating_point(e);
  auto alt = assemble_adjoint(e, s, AdjointForm::expanded);
  auto con = assemble_adjoint(e, s, AdjointForm::consistent);
  EXPECT_TRUE(std::isfinite(alt.grad[0]) && std::isfinite(alt.grad[1]));
  EXPECT_DOUBLE_EQ(alt.J, con.J);
  EXPECT_NE(alt.M[1][0], con.M[1][0]);
}

TEST(Optimizer, ImprovesOnSimplifiedOptimum) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto e = fixtures::element_at(fixtures::small_rotor(), polar, 1.2,
                                CorrectionSpec::make(CorrectionVariant::wilson_spera, true));
  auto res = optimize_element(e);
  EXPECT_GE(res.best.J, res.initial.J);
  EXPECT_GT(res.accepted, 0u);
  double prev = res.initial.J;
  for (double J : res.history) {
    EXPECT_GE(J, prev);
    prev = J;
  }
  if (res.converged) {
    EXPECT_LE(res.grad_norm, 1e-6);
    // Started at the optimum, no step is taken.
    auto again = optimize_element(e.with_design(res.best.gamma, res.best.chord));
    EXPECT_EQ(again.accepted, 0u);
    EXPECT_TRUE(again.converged);
  }
}

TEST(Optimizer, UnsolvableStart) {
  auto polar = fixtures::thin_airfoil();
  ElementGeometry g = ElementGeometry::place(fixtures::small_rotor(), 1.0, -1.5, 0.1);
  BladeElement e(g, polar, CorrectionSpec::make(CorrectionVariant::wilson_spera, true));
  EXPECT_THROW(optimize_element(e), Error);
}

TEST(Sweep, ZeroLiftDesignHasNoPower) {
  auto polar = fixtures::thin_airfoil();
  auto t = fixtures::small_rotor();
  auto res = cp_sweep(t, polar, CorrectionSpec::simplified(),
                      [](double l) { return std::array<double, 2>{std::atan(1 / l), 0.1}; }, 20);
  EXPECT_EQ(res.failures, 0u);
  EXPECT_EQ(res.Cp, 0.0);
}

TEST(Sweep, TrapezoidOnConstantIntegrand) {
  const double k = 0.37, lmin = 0.2, lmax = 2.0;
  auto grid = numeric::linspace(lmin, lmax, 17);
  std::vector<double> J;
  for (double l : grid) J.push_back(k / (l * l * l));
  EXPECT_NEAR(power_coefficient(grid, J, lmax), 8 * k * (lmax - lmin) / (lmax * lmax), 1e-14);
}

TEST(Sweep, RefinementChangesLittle) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto t = fixtures::small_rotor();
  t.lambda_max = 1.6;  // keep clear of the tip, where the tip factor vanishes
  DesignLaw law = [&](double l) {
    auto d = simplified_optimum(l, polar, t);
    return std::array<double, 2>{d.gamma, d.chord};
  };
  auto corr = CorrectionSpec::make(CorrectionVariant::wilson_spera, true);
  auto coarse = cp_sweep(t, polar, corr, law, 50, 4);
  auto fine = cp_sweep(t, polar, corr, law, 400, 4);
  EXPECT_EQ(coarse.failures, 0u);
  EXPECT_LT(std::abs(coarse.Cp - fine.Cp), 1e-4);
  EXPECT_GT(coarse.Cp, 0.0);
}

TEST(Sweep, ThreadCountDoesNotChangeResult) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto t = fixtures::small_rotor();
  DesignLaw law = [&](double l) {
    auto d = simplified_optimum(l, polar, t);
    return std::array<double, 2>{d.gamma, d.chord};
  };
  auto corr = CorrectionSpec::make(CorrectionVariant::buhl, true);
  auto one = cp_sweep(t, polar, corr, law, 64, 1);
  auto many = cp_sweep(t, polar, corr, law, 64, 7);
  EXPECT_EQ(one.Cp, many.Cp);
}

TEST(Sweep, FailedElementsContributeZero) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto t = fixtures::small_rotor();
  DesignLaw law = [&](double l) {
    if (l > 1.5) return std::array<double, 2>{-1.5, 0.1};
    auto d = simplified_optimum(l, polar, t);
    return std::array<double, 2>{d.gamma, d.chord};
  };
  auto res = cp_sweep(t, polar, CorrectionSpec::make(CorrectionVariant::wilson_spera, true), law, 19);
  EXPECT_GT(res.failures, 0u);
  EXPECT_LT(res.failures, 19u);
  std::vector<double> J;
  for (const auto& el : res.elements) {
    if (!el.valid) {
      EXPECT_EQ(el.J, 0.0);
      EXPECT_FALSE(el.message.empty());
    }
    J.push_back(el.J);
  }
  EXPECT_EQ(res.Cp, power_coefficient(res.lambda_grid, J, t.lambda_max));
  EXPECT_THROW(cp_sweep(t, polar, CorrectionSpec::make(CorrectionVariant::wilson_spera, true),
                        [](double) { return std::array<double, 2>{-1.5, 0.1}; }, 5),
               Error);
}

TEST(Landscape, FlagsUnsolvableCells) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto e = fixtures::element_at(fixtures::small_rotor(), polar, 1.0,
                                CorrectionSpec::make(CorrectionVariant::wilson_spera, true));
  auto L = landscape(e, {-1.5, 0.5}, {0.01, 0.5}, 16, 4);
  ASSERT_EQ(L.cells.size(), 256u);
  std::size_t invalid = 0;
  for (const auto& c : L.cells) invalid += c.valid ? 0 : 1;
  EXPECT_GT(invalid, 0u);
  EXPECT_FALSE(L.at(0, 0).valid);
}

TEST(Landscape, MonotoneLiftHasSingleBranch) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto e = fixtures::element_at(fixtures::small_rotor(), polar, 1.0, CorrectionSpec::make(CorrectionVariant::none, false));
  const double g = e.geometry().gamma, c = e.geometry().chord;
  auto L = landscape(e, {g - 0.05, g + 0.05}, {0.5 * c, 1.5 * c}, 16, 4);
  for (const auto& cell : L.cells) {
    EXPECT_TRUE(cell.valid);
    EXPECT_FALSE(cell.multiple_roots);
  }
}

TEST(Landscape, OptimizerEndsNearGridMaximum) {
  auto polar = fixtures::thin_airfoil(0.01, 0.2);
  auto e = fixtures::element_at(fixtures::small_rotor(), polar, 1.2,
                                CorrectionSpec::make(CorrectionVariant::wilson_spera, true));
  auto opt = optimize_element(e);
  const double g = opt.best.gamma, c = opt.best.chord;
  auto L = landscape(e, {g - 0.2, g + 0.2}, {0.5 * c, 1.5 * c}, 21, 4);
  std::size_t best = 0;
  for (std::size_t k = 1; k < L.cells.size(); ++k) {
    if (L.cells[k].valid && L.cells[k].J > L.cells[best].J) best = k;
  }
  const double dg = L.gammas[1] - L.gammas[0], dc = L.chords[1] - L.chords[0];
  EXPECT_LE(std::abs(L.cells[best].gamma - g), 1.01 * dg);
  EXPECT_LE(std::abs(L.cells[best].chord - c), 1.01 * dc);
  EXPECT_GE(opt.best.J, L.cells[best].J - 1e-12);
}

TEST(Parallel, RethrowsWorkerFailure) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw Error(ErrorKind::internal, "boom");
                            }),
               Error);
}
