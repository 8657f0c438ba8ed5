#include "bem/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bem/error.hpp"
#include "bem/numeric.hpp"

namespace bem {

namespace {

using numeric::pi;

constexpr double kAngleGuard = 1e-9;
constexpr double kEmpiricalSpan = 2.5708;
constexpr double kEmpiricalOffset = 0.286;

[[noreturn]] void domain_error(const std::string& what, double phi) {
  std::ostringstream msg;
  msg << what << " (phi=" << phi << ")";
  throw Error(ErrorKind::domain, msg.str());
}

// psi = c2 x^2 + c1 x for the variants where that form is exact.
struct Quadratic {
  double c2 = 0.0;
  double c1 = 0.0;
};

std::optional<Quadratic> quadratic_form(const CorrectionSpec& corr, double tip) {
  const double ac = corr.a_c;
  switch (corr.variant) {
    case CorrectionVariant::wilson_spera:
      return Quadratic{1.0, 0.0};
    case CorrectionVariant::buhl: {
      const double d = 1.0 - ac;
      return Quadratic{1.0 / (2.0 * tip * d * d), 0.0};
    }
    case CorrectionVariant::glauert_empirical:
      return Quadratic{tip * tip / kEmpiricalSpan + 1.0,
                       (2.0 * ac * tip - kEmpiricalOffset) * tip / kEmpiricalSpan -
                           (1.0 - 2.0 * ac)};
    default:
      return std::nullopt;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration types

void TurbineConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::validation, m); };
  if (blade_count < 1) fail("turbine: blade count must be at least 1");
  if (!(radius > 0.0)) fail("turbine: radius must be positive");
  if (!(fluid_density > 0.0)) fail("turbine: fluid density must be positive");
  if (!(upstream_speed > 0.0)) fail("turbine: upstream speed must be positive");
  if (!(rotation_speed > 0.0)) fail("turbine: rotation speed must be positive");
  if (!(lambda_min > 0.0 && lambda_min < lambda_max)) {
    fail("turbine: need 0 < lambda_min < lambda_max");
  }
  if (radius_at(lambda_max) > radius * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "turbine: lambda_max=" << lambda_max << " places the element at r="
        << radius_at(lambda_max) << " beyond the tip radius " << radius;
    fail(msg.str());
  }
}

ElementGeometry ElementGeometry::place(const TurbineConfig& turbine, double lambda,
                                       double gamma, double chord) {
  ElementGeometry g;
  g.lambda = lambda;
  g.r = std::min(turbine.radius_at(lambda), turbine.radius);
  if (turbine.radius_at(lambda) > turbine.radius * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "lambda=" << lambda << " lies beyond the blade tip";
    throw Error(ErrorKind::validation, msg.str());
  }
  g.gamma = gamma;
  g.chord = chord;
  g.blade_count = turbine.blade_count;
  g.tip_radius = turbine.radius;
  g.validate();
  return g;
}

double ElementGeometry::solidity() const {
  return blade_count * chord / (2.0 * pi * r);
}

double ElementGeometry::theta() const { return std::atan(1.0 / lambda); }

void ElementGeometry::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::validation, m); };
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("element: lambda must be positive");
  if (!(r > 0.0)) fail("element: radius must be positive");
  if (!(tip_radius > 0.0) || r > tip_radius * (1.0 + 1e-12)) {
    fail("element: radius must lie in (0, R]");
  }
  if (!(chord > 0.0) || !std::isfinite(chord)) fail("element: chord must be positive");
  if (!(std::abs(gamma) < pi / 2.0)) fail("element: |twist| must be below pi/2");
  if (blade_count < 1) fail("element: blade count must be at least 1");
}

std::string_view to_string(CorrectionVariant v) noexcept {
  switch (v) {
    case CorrectionVariant::none: return "none";
    case CorrectionVariant::glauert3: return "glauert3";
    case CorrectionVariant::glauert_empirical: return "glauert_empirical";
    case CorrectionVariant::buhl: return "buhl";
    case CorrectionVariant::wilson_spera: return "wilson_spera";
  }
  return "unknown";
}

CorrectionVariant parse_correction_variant(std::string_view name) {
  for (auto v : {CorrectionVariant::none, CorrectionVariant::glauert3,
                 CorrectionVariant::glauert_empirical, CorrectionVariant::buhl,
                 CorrectionVariant::wilson_spera}) {
    if (to_string(v) == name) return v;
  }
  throw Error(ErrorKind::configuration,
              "unknown correction variant '" + std::string(name) + "'");
}

double default_threshold(CorrectionVariant v) noexcept {
  switch (v) {
    case CorrectionVariant::glauert3:
    case CorrectionVariant::wilson_spera:
      return 1.0 / 3.0;
    case CorrectionVariant::glauert_empirical:
    case CorrectionVariant::buhl:
      return 0.4;
    case CorrectionVariant::none:
      break;
  }
  return 1.0;
}

CorrectionSpec CorrectionSpec::make(CorrectionVariant variant, bool tip_loss,
                                    std::optional<double> a_c) {
  CorrectionSpec c;
  c.variant = variant;
  c.tip_loss = tip_loss;
  c.a_c = a_c.value_or(default_threshold(variant));
  c.validate();
  return c;
}

CorrectionSpec CorrectionSpec::simplified() {
  CorrectionSpec c;
  c.drag = false;
  return c;
}

void CorrectionSpec::validate() const {
  if (!(a_c > 0.0 && a_c <= 1.0)) {
    std::ostringstream msg;
    msg << "correction threshold a_c=" << a_c << " must lie in (0, 1]";
    throw Error(ErrorKind::validation, msg.str());
  }
}

// ---------------------------------------------------------------------------
// Scalar model functions

PsiValue psi_excess(const CorrectionSpec& corr, double x, double tip) {
  PsiValue out;
  if (!(x > 0.0)) return out;
  const double ac = corr.a_c;
  switch (corr.variant) {
    case CorrectionVariant::none:
      break;
    case CorrectionVariant::wilson_spera:
      out.value = x * x;
      out.dx = 2.0 * x;
      break;
    case CorrectionVariant::glauert3:
      out.value = 0.25 * x * (x * x / ac + 2.0 * x + ac);
      out.dx = 0.75 * x * x / ac + x + 0.25 * ac;
      break;
    case CorrectionVariant::buhl: {
      const double d2 = (1.0 - ac) * (1.0 - ac);
      out.value = x * x / (2.0 * tip * d2);
      out.dx = x / (tip * d2);
      out.dF = -out.value / tip;
      break;
    }
    case CorrectionVariant::glauert_empirical: {
      // Empirical thrust law minus the momentum term it replaces.
      const double f = tip;
      const double emp = x * (f * (x + 2.0 * ac) - kEmpiricalOffset) * f / kEmpiricalSpan;
      out.value = emp - x * (1.0 - 2.0 * ac) + x * x;
      out.dx = (f * f * (2.0 * x + 2.0 * ac) - kEmpiricalOffset * f) / kEmpiricalSpan -
               (1.0 - 2.0 * ac) + 2.0 * x;
      out.dF = (2.0 * f * (x * x + 2.0 * ac * x) - kEmpiricalOffset * x) / kEmpiricalSpan;
      break;
    }
  }
  return out;
}

double psi(const CorrectionSpec& corr, double a, double tip) {
  if (corr.variant == CorrectionVariant::glauert_empirical && corr.unit_tip_in_correction) {
    tip = 1.0;
  }
  return psi_excess(corr, std::max(0.0, a - corr.a_c), tip).value;
}

double mu_G(double theta, double phi) {
  const double c = std::cos(theta - phi);
  if (std::abs(c) < kAngleGuard) domain_error("mu_G: pole at theta - phi = +-pi/2", phi);
  return std::sin(phi) * std::tan(theta - phi);
}

double mu_G_prime(double theta, double phi) {
  const double c = std::cos(theta - phi);
  if (std::abs(c) < kAngleGuard) domain_error("mu_G': pole at theta - phi = +-pi/2", phi);
  return std::cos(phi) * std::tan(theta - phi) - std::sin(phi) / (c * c);
}

double prandtl_tip_factor(int blades, double r_over_R, double phi) {
  const double s = std::sin(phi);
  if (!(s > 0.0)) domain_error("tip factor needs sin(phi) > 0", phi);
  if (!(r_over_R > 0.0 && r_over_R <= 1.0 + 1e-12)) {
    throw Error(ErrorKind::domain, "tip factor needs 0 < r/R <= 1");
  }
  const double k = 0.5 * blades * (1.0 - r_over_R) / r_over_R;
  return (2.0 / pi) * std::acos(std::exp(-std::max(0.0, k) / s));
}

double prandtl_tip_factor_prime(int blades, double r_over_R, double phi) {
  const double s = std::sin(phi);
  if (!(s > 0.0)) domain_error("tip factor needs sin(phi) > 0", phi);
  const double k = 0.5 * blades * std::max(0.0, 1.0 - r_over_R) / r_over_R;
  const double e = std::exp(-k / s);
  if (e >= 1.0) {
    throw Error(ErrorKind::tip_singularity, "tip factor derivative undefined at r = R");
  }
  return -(2.0 / pi) * e * k * std::cos(phi) / (s * s * std::sqrt(1.0 - e * e));
}

std::optional<BladeElement::Tau> solve_axial(const CorrectionSpec& corr, double rhs,
                                             double scale, double tip) {
  if (!(rhs > -1.0) || !std::isfinite(rhs)) return std::nullopt;
  const double nu0 = 1.0 / (1.0 + rhs);
  const double a0 = rhs / (1.0 + rhs);
  const double ac = corr.threshold();
  if (corr.variant == CorrectionVariant::none || a0 <= ac || !(scale > 0.0)) {
    return BladeElement::Tau{a0, nu0};
  }

  const double d = 1.0 - ac;
  if (corr.variant == CorrectionVariant::glauert_empirical && corr.unit_tip_in_correction) {
    tip = 1.0;
  }

  if (const auto q = quadratic_form(corr, tip)) {
    // (1 - nu) nu + s psi(d - nu) - rhs nu^2 = 0 with psi quadratic.
    const double c2 = -1.0 + scale * q->c2 - rhs;
    const double c1 = 1.0 - 2.0 * scale * q->c2 * d - scale * q->c1;
    const double c0 = scale * (q->c2 * d * d + q->c1 * d);
    double r0 = 0.0;
    double r1 = 0.0;
    const int n = numeric::solve_quadratic(c2, c1, c0, r0, r1);
    for (int i = 0; i < n; ++i) {
      const double nu = i == 0 ? r0 : r1;
      if (nu > 0.0 && nu <= d * (1.0 + 1e-12)) {
        const double v = std::min(nu, d);
        return BladeElement::Tau{1.0 - v, v};
      }
    }
  }

  auto h = [&](double nu) {
    const double x = d - nu;
    return (1.0 - nu) * nu + scale * psi_excess(corr, x, tip).value - rhs * nu * nu;
  };
  double lo = 0.0;
  double hi = d;
  for (int it = 0; it < 2000 && hi - lo > 1e-16 * hi; ++it) {
    double mid;
    if (lo == 0.0) {
      mid = 0.5 * hi;
    } else if (hi > 4.0 * lo) {
      mid = std::sqrt(lo * hi);
    } else {
      mid = lo + 0.5 * (hi - lo);
    }
    if (mid <= lo || mid >= hi) break;
    if (h(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi < 1e-300) break;
  }
  const double nu = lo == 0.0 ? hi : 0.5 * (lo + hi);
  return BladeElement::Tau{1.0 - nu, nu};
}

// ---------------------------------------------------------------------------
// BladeElement

BladeElement::BladeElement(ElementGeometry geom, const PolarTable& polar,
                           CorrectionSpec corr)
    : geom_(geom), polar_(&polar), corr_(corr) {
  geom_.validate();
  corr_.validate();
  theta_ = geom_.theta();
  sigma_ = geom_.solidity();
}

BladeElement BladeElement::with_design(double gamma, double chord) const {
  ElementGeometry g = geom_;
  g.gamma = gamma;
  g.chord = chord;
  return BladeElement(g, *polar_, corr_);
}

BladeElement BladeElement::with_correction(const CorrectionSpec& corr) const {
  return BladeElement(geom_, *polar_, corr);
}

bool BladeElement::admits_nonpositive_phi() const noexcept {
  return corr_.variant == CorrectionVariant::none && !corr_.tip_loss;
}

double BladeElement::guard(double phi) const {
  if (!std::isfinite(phi)) domain_error("non-finite angle", phi);
  if (phi <= 0.0) {
    if (!admits_nonpositive_phi()) {
      domain_error("corrected model is defined for phi > 0 only", phi);
    }
    return phi;
  }
  return std::max(phi, kAngleGuard);
}

double BladeElement::mu_L(double phi) const {
  return 0.25 * sigma_ * polar_->cl(phi - geom_.gamma);
}

double BladeElement::mu_D(double phi) const {
  return corr_.drag ? 0.25 * sigma_ * polar_->cd(phi - geom_.gamma) : 0.0;
}

double BladeElement::mu_L_prime(double phi) const {
  return 0.25 * sigma_ * polar_->cl_prime(phi - geom_.gamma);
}

double BladeElement::mu_D_prime(double phi) const {
  return corr_.drag ? 0.25 * sigma_ * polar_->cd_prime(phi - geom_.gamma) : 0.0;
}

double BladeElement::tip_factor(double phi) const {
  if (!corr_.tip_loss) return 1.0;
  const double f = prandtl_tip_factor(geom_.blade_count, geom_.r_over_R(), phi);
  if (!(f > 0.0)) {
    throw Error(ErrorKind::tip_singularity,
                "tip factor vanishes (element at the blade tip)");
  }
  return f;
}

double BladeElement::tip_factor_prime(double phi) const {
  if (!corr_.tip_loss) return 0.0;
  return prandtl_tip_factor_prime(geom_.blade_count, geom_.r_over_R(), phi);
}

bool BladeElement::psi_uses_tip() const noexcept {
  return corr_.variant == CorrectionVariant::buhl ||
         (corr_.variant == CorrectionVariant::glauert_empirical && !corr_.unit_tip_in_correction);
}

double BladeElement::psi_tip_factor(double phi) const {
  return psi_uses_tip() ? tip_factor(phi) : 1.0;
}

double BladeElement::psi_tip_factor_prime(double phi) const {
  return psi_uses_tip() ? tip_factor_prime(phi) : 0.0;
}

double BladeElement::mu_L_c(double phi) const { return mu_L(phi) / tip_factor(phi); }

double BladeElement::mu_D_c(double phi) const { return mu_D(phi) / tip_factor(phi); }

double BladeElement::mu_L_c_prime(double phi) const {
  const double f = tip_factor(phi);
  return (mu_L_prime(phi) - mu_L(phi) * tip_factor_prime(phi) / f) / f;
}

double BladeElement::mu_D_c_prime(double phi) const {
  if (!corr_.drag) return 0.0;
  const double f = tip_factor(phi);
  return (mu_D_prime(phi) - mu_D(phi) * tip_factor_prime(phi) / f) / f;
}

double BladeElement::g(double phi) const {
  if (!(phi > 0.0)) domain_error("g is defined for phi > 0", phi);
  if (phi > theta_ + kAngleGuard) domain_error("g is defined for phi <= theta", phi);
  phi = guard(phi);
  const double p = std::tan(theta_ - phi) / std::tan(phi);
  return p + mu_D_c(phi) / std::sin(phi) * (1.0 + p);
}

double BladeElement::g_prime(double phi) const {
  phi = guard(phi);
  const double s = std::sin(phi);
  const double t = std::tan(theta_ - phi);
  const double c = std::cos(theta_ - phi);
  const double cot = 1.0 / std::tan(phi);
  const double p = cot * t;
  const double dp = -t / (s * s) - cot / (c * c);
  const double md = mu_D_c(phi);
  const double dmd = mu_D_c_prime(phi);
  return dp + (dmd / s - md * std::cos(phi) / (s * s)) * (1.0 + p) + md / s * dp;
}

BladeElement::Tau BladeElement::tau(double phi) const {
  const double rhs = g(phi);
  phi = guard(phi);
  const double v = std::sin(theta_) * std::sin(phi) / std::cos(theta_ - phi);
  const auto sol = solve_axial(corr_, rhs, v, psi_tip_factor(phi));
  if (!sol) {
    std::ostringstream msg;
    msg << "implicit induction equation has no root in [0,1) at phi=" << phi
        << " (g=" << rhs << ")";
    throw Error(ErrorKind::internal, msg.str());
  }
  return *sol;
}

double BladeElement::tau_prime(double phi) const {
  phi = guard(phi);
  const Tau t = tau(phi);
  const double nu = t.one_minus_a;
  const double x = std::max(0.0, (1.0 - corr_.threshold()) - nu);
  const double cth = std::cos(theta_ - phi);
  const double v = std::sin(theta_) * std::sin(phi) / cth;
  const double dv = std::sin(theta_) * std::cos(theta_) / (cth * cth);
  const double ftip = psi_tip_factor(phi);
  const double dftip = psi_tip_factor_prime(phi);
  double w = 0.0, wa = 0.0, wf = 0.0;
  if (x > 0.0) {
    const PsiValue ps = psi_excess(corr_, x, ftip);
    w = ps.value / (nu * nu);
    wa = ps.dx / (nu * nu) + 2.0 * ps.value / (nu * nu * nu);
    wf = ps.dF / (nu * nu);
  }
  return (g_prime(phi) - dv * w - v * wf * dftip) / (1.0 / (nu * nu) + v * wa);
}

double BladeElement::mu_G_c(double phi) const {
  if (corr_.variant == CorrectionVariant::none) return mu_G(theta_, guard(phi));
  phi = guard(phi);
  const Tau t = tau(phi);
  const double x = std::max(0.0, (1.0 - corr_.a_c) - t.one_minus_a);
  const double q = std::cos(theta_) * std::sin(phi) * std::sin(phi) / std::cos(theta_ - phi);
  const double w = psi_excess(corr_, x, psi_tip_factor(phi)).value / (t.one_minus_a * t.one_minus_a);
  return mu_G(theta_, phi) + q * w;
}

ResidualParts BladeElement::residual_parts(double phi) const {
  phi = guard(phi);
  ResidualParts out;
  out.lift = mu_L_c(phi);
  out.drag = corr_.drag ? std::tan(theta_ - phi) * mu_D_c(phi) : 0.0;
  out.geometric = mu_G_c(phi);
  out.value = out.lift - out.drag - out.geometric;
  return out;
}

double BladeElement::residual_prime(double phi) const {
  phi = guard(phi);
  const double cth = std::cos(theta_ - phi);
  const double t = std::tan(theta_ - phi);
  double dr = mu_L_c_prime(phi) - mu_G_prime(theta_, phi);
  if (corr_.drag) dr += mu_D_c(phi) / (cth * cth) - t * mu_D_c_prime(phi);
  if (corr_.variant == CorrectionVariant::none) return dr;

  const Tau ta = tau(phi);
  const double nu = ta.one_minus_a;
  const double x = std::max(0.0, (1.0 - corr_.a_c) - nu);
  if (!(x > 0.0)) return dr;

  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double q = std::cos(theta_) * s * s / cth;
  const double dq = std::cos(theta_) * (2.0 * s * c * cth - s * s * std::sin(theta_ - phi)) /
                    (cth * cth);
  const double ftip = psi_tip_factor(phi);
  const double dftip = psi_tip_factor_prime(phi);
  const PsiValue ps = psi_excess(corr_, x, ftip);
  const double w = ps.value / (nu * nu);
  const double wa = ps.dx / (nu * nu) + 2.0 * ps.value / (nu * nu * nu);
  const double wf = ps.dF / (nu * nu);
  const double dw = wa * tau_prime(phi) + wf * dftip;
  return dr - dq * w - q * dw;
}

std::optional<double> BladeElement::axial_from_balance(double phi) const {
  phi = guard(phi);
  const double s = std::sin(phi);
  if (std::abs(s) < kAngleGuard) return std::nullopt;
  const double rhs = (mu_L_c(phi) * std::cos(phi) + mu_D_c(phi) * s) / (s * s);
  const auto sol = solve_axial(corr_, rhs, 1.0, psi_tip_factor(phi));
  if (!sol) return std::nullopt;
  return sol->a;
}

double BladeElement::angular_from_balance(double phi, double a) const {
  phi = guard(phi);
  const double s = std::sin(phi);
  return (1.0 - a) / (geom_.lambda * s * s) * (mu_L_c(phi) * s - mu_D_c(phi) * std::cos(phi));
}

FlowState BladeElement::recover_induction(double phi) const {
  FlowState st;
  st.phi = phi;
  st.alpha = phi - geom_.gamma;
  const double cl = polar_->cl(st.alpha);
  st.lift_sign = (cl > 0.0) - (cl < 0.0);
  st.residual = residual(phi);
  const double gp = guard(phi);
  st.tip_factor = tip_factor(gp);
  st.near_singular = std::abs(std::sin(gp)) < 1e-6 || std::abs(std::cos(gp)) < 1e-6;
  if (std::abs(std::sin(gp)) < 1e-12) {
    st.a = 1.0;
    st.a_prime = 0.0;
    return st;
  }
  if (corr_.variant == CorrectionVariant::none) {
    const auto a = axial_from_balance(gp);
    if (a) {
      st.a = *a;
    } else {
      // Only a > 1 solves the balance here (negative lift at phi < 0).
      const double s = std::sin(gp);
      const double rhs = (mu_L_c(gp) * std::cos(gp) + mu_D_c(gp) * s) / (s * s);
      if (rhs == -1.0) {
        st.near_singular = true;
        st.a = 1.0;
        st.a_prime = 0.0;
        return st;
      }
      st.a = rhs / (1.0 + rhs);
    }
  } else {
    st.a = tau(gp).a;
  }
  st.a_prime = angular_from_balance(gp, st.a);
  return st;
}

double BladeElement::Violation::max_abs() const {
  return std::max({std::abs(tangent), std::abs(axial), std::abs(angular)});
}

BladeElement::Violation BladeElement::original_equations(double phi, double a,
                                                         double a_prime) const {
  phi = guard(phi);
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double ml = mu_L_c(phi);
  const double md = mu_D_c(phi);
  Violation v;
  v.tangent = std::tan(phi) - (1.0 - a) / (geom_.lambda * (1.0 + a_prime));
  v.axial = a / (1.0 - a) - (ml * c + md * s) / (s * s) +
            psi_excess(corr_, std::max(0.0, a - corr_.threshold()), psi_tip_factor(phi)).value /
                ((1.0 - a) * (1.0 - a));
  v.angular = a_prime / (1.0 - a) - (ml * s - md * c) / (geom_.lambda * s * s);
  return v;
}

AngleInterval BladeElement::interval_I() const {
  const double beta = polar_->beta();
  return {std::max(geom_.gamma - beta, theta_ - pi / 2.0 + kAngleGuard),
          std::min(geom_.gamma + beta, theta_ + pi / 2.0 - kAngleGuard)};
}

AngleInterval BladeElement::interval_I_plus() const {
  const AngleInterval i = interval_I();
  return {std::max(i.lo, 0.0), std::min(i.hi, theta_)};
}

AngleInterval BladeElement::evaluation_range() const {
  double lo = polar_->alpha_min() + geom_.gamma;
  double hi = polar_->alpha_max() + geom_.gamma;
  if (admits_nonpositive_phi() && corr_.is_simplified()) {
    lo = std::max(lo, theta_ - pi / 2.0 + kAngleGuard);
    hi = std::min(hi, theta_ + pi / 2.0 - kAngleGuard);
  } else {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, theta_);
  }
  return {lo, hi};
}

Loads loads_diagnostics(const TurbineConfig& turbine, const BladeElement& element,
                        const FlowState& state) {
  const auto& corr = element.correction();
  const double f = state.tip_factor;
  const double chi = state.a * (1.0 - state.a) + psi(corr, state.a, f);
  const double u2 = turbine.upstream_speed * turbine.upstream_speed;
  const double r = element.geometry().r;
  Loads out;
  out.thrust_coefficient = 4.0 * chi * f;
  out.thrust_per_span = out.thrust_coefficient * u2 * turbine.fluid_density * pi * r;
  out.torque_per_span = 4.0 * state.a_prime * (1.0 - state.a) * f *
                        element.geometry().lambda * u2 * turbine.fluid_density * pi * r * r;
  out.axial_velocity = (1.0 - state.a) * turbine.upstream_speed;
  out.wake_rotation = 2.0 * state.a_prime * turbine.rotation_speed;
  return out;
}

}  // namespace bem
