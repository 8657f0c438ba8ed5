#include "bem/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bem/error.hpp"
#include "bem/numeric.hpp"

namespace bem {

namespace {

constexpr double kBracketLow = 1e-4;
constexpr double kTinySlope = 1e-14;

bool same_sign(double x, double y) { return (x > 0.0 && y > 0.0) || (x < 0.0 && y < 0.0); }

void finish(SolveReport& rep, const BladeElement& element, double phi, bool converged,
            SolveStatus status) {
  rep.phi_star = phi;
  rep.converged = converged;
  rep.status = status;
  rep.iterations = rep.residual_history.size();
  try {
    rep.state = element.recover_induction(phi);
  } catch (const Error& e) {
    rep.state.phi = phi;
    rep.state.near_singular = true;
    if (rep.message.empty()) rep.message = e.what();
  }
}

void record(SolveReport& rep, double phi, double r) {
  if (!rep.iterates.empty() && phi > rep.iterates.back()) rep.monotone = false;
  rep.iterates.push_back(phi);
  rep.residual_history.push_back(r);
}

std::vector<double> interior_grid(const AngleInterval& iv, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = iv.lo + (iv.hi - iv.lo) * static_cast<double>(i + 1) / static_cast<double>(n);
  }
  return out;
}

AngleInterval sampled_I_plus(const BladeElement& element) {
  AngleInterval iv = element.interval_I_plus();
  const AngleInterval range = element.evaluation_range();
  iv.lo = std::max(iv.lo, range.lo);
  iv.hi = std::min(iv.hi, range.hi);
  if (iv.empty()) {
    throw Error(ErrorKind::configuration,
                "working interval I+ is empty for this element and polar");
  }
  return iv;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::usual: return "usual";
    case Method::fixed_point: return "fixed";
    case Method::newton: return "newton";
    case Method::bisection: return "bisect";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "usual") return Method::usual;
  if (name == "fixed") return Method::fixed_point;
  if (name == "newton") return Method::newton;
  if (name == "bisect") return Method::bisection;
  throw Error(ErrorKind::configuration, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::stalled: return "stalled";
  }
  return "unknown";
}

std::string_view to_string(RootCategory c) noexcept {
  switch (c) {
    case RootCategory::principal: return "principal";
    case RootCategory::negative_lift_branch: return "negative_lift_branch";
    case RootCategory::stall_branch: return "stall_branch";
    case RootCategory::correction_branch: return "correction_branch";
  }
  return "unknown";
}

void SolveOptions::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::configuration, m); };
  if (!(tol > 0.0)) fail("solver: tol must be positive");
  if (max_iter == 0) fail("solver: max_iter must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) fail("solver: epsilon must lie in (0, 1]");
  if (!(phi_tol > 0.0)) fail("solver: phi_tol must be positive");
  if (grid_points < 2) fail("solver: grid_points must be at least 2");
  if (bracket && !(bracket->lo < bracket->hi)) fail("solver: bracket needs lo < hi");
}

AngleInterval default_bracket(const BladeElement& element, const SolveOptions& opts) {
  AngleInterval b = opts.bracket.value_or(AngleInterval{kBracketLow, element.theta()});
  if (!opts.bracket) {
    const AngleInterval range = element.evaluation_range();
    b.lo = std::max(b.lo, range.lo);
    b.hi = std::min(b.hi, range.hi);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Classic iteration

SolveReport solve_usual(const BladeElement& element, const SolveOptions& opts) {
  opts.validate();
  SolveReport rep;
  rep.method = Method::usual;
  const double lambda = element.geometry().lambda;

  double a = 0.0;
  double ap = 0.0;
  double last_phi = element.theta();
  try {
    if (opts.phi0) {
      const double phi0 = *opts.phi0;
      const double r0 = element.residual(phi0);
      rep.initial_residual = r0;
      last_phi = phi0;
      if (std::abs(r0) <= opts.tol) {
        finish(rep, element, phi0, true, SolveStatus::converged);
        return rep;
      }
      const auto a0 = element.axial_from_balance(phi0);
      if (!a0) throw Error(ErrorKind::domain, "axial balance has no solution at phi0");
      a = *a0;
      ap = element.angular_from_balance(phi0, a);
    }
  } catch (const Error& e) {
    rep.message = e.what();
    finish(rep, element, last_phi, false, SolveStatus::diverged);
    return rep;
  }

  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    const double phi = std::atan((1.0 - a) / (lambda * (1.0 + ap)));
    double r;
    try {
      if (!std::isfinite(phi)) throw Error(ErrorKind::domain, "non-finite iterate");
      r = element.residual(phi);
    } catch (const Error& e) {
      rep.message = e.what();
      finish(rep, element, last_phi, false, SolveStatus::diverged);
      return rep;
    }
    record(rep, phi, r);
    last_phi = phi;
    if (std::abs(r) <= opts.tol) {
      finish(rep, element, phi, true, SolveStatus::converged);
      return rep;
    }
    try {
      const auto next = element.axial_from_balance(phi);
      if (!next) throw Error(ErrorKind::domain, "axial balance has no solution");
      a = *next;
      ap = element.angular_from_balance(phi, a);
      if (!std::isfinite(a) || !std::isfinite(ap)) {
        throw Error(ErrorKind::domain, "non-finite induction factors");
      }
    } catch (const Error& e) {
      rep.message = e.what();
      finish(rep, element, last_phi, false, SolveStatus::diverged);
      return rep;
    }
  }
  rep.message = "maximum number of iterations reached";
  finish(rep, element, last_phi, false, SolveStatus::max_iter);
  return rep;
}

// ---------------------------------------------------------------------------
// Damped residual iteration

double fixed_point_step(const BladeElement& element, double phi, double max_lift_slope,
                        double epsilon) {
  const double t = std::tan(element.theta());
  const double denom = std::max(0.0, -mu_G_prime(element.theta(), phi)) + max_lift_slope +
                       (1.0 + t * t) * element.mu_D_c(phi);
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::configuration,
                "step factor undefined: the largest lift slope over I+ is " +
                    fmt(max_lift_slope) +
                    ", so the lift is not non-decreasing there (denominator " +
                    fmt(denom) + ")");
  }
  return epsilon / denom;
}

SlopeBounds slope_bounds(const BladeElement& element, std::size_t grid_points) {
  const AngleInterval iv = sampled_I_plus(element);
  SlopeBounds b;
  b.min_lift_slope = b.min_drag_slope = std::numeric_limits<double>::infinity();
  b.max_lift_slope = b.max_drag_slope = b.max_lift = -std::numeric_limits<double>::infinity();
  double prev_l = -std::numeric_limits<double>::infinity();
  double prev_d = -std::numeric_limits<double>::infinity();
  for (double phi : interior_grid(iv, grid_points)) {
    const double l = element.mu_L_c(phi);
    const double d = element.mu_D_c(phi);
    const double dl = element.mu_L_c_prime(phi);
    const double dd = element.mu_D_c_prime(phi);
    b.min_lift_slope = std::min(b.min_lift_slope, dl);
    b.max_lift_slope = std::max(b.max_lift_slope, dl);
    b.min_drag_slope = std::min(b.min_drag_slope, dd);
    b.max_drag_slope = std::max(b.max_drag_slope, dd);
    b.max_lift = std::max(b.max_lift, l);
    if (l < prev_l - 1e-14 * std::abs(prev_l)) b.lift_nondecreasing = false;
    if (d < prev_d - 1e-14 * std::abs(prev_d)) b.drag_nondecreasing = false;
    prev_l = l;
    prev_d = d;
  }
  return b;
}

std::optional<double> fixed_point_rate_bound(const BladeElement& element,
                                             std::size_t grid_points) {
  const SlopeBounds b = slope_bounds(element, grid_points);
  const double theta = element.theta();
  const double t = std::tan(theta);
  const double gap = b.min_lift_slope - t * (1.0 + b.max_drag_slope);
  if (!(gap > 0.0)) return std::nullopt;
  const double scale =
      b.max_lift_slope + std::sin(theta) + (1.0 + t * t) * element.mu_D_c(theta);
  return 1.0 - gap / scale;
}

SolveReport solve_fixed_point(const BladeElement& element, const SolveOptions& opts) {
  opts.validate();
  SolveReport rep;
  rep.method = Method::fixed_point;
  double phi = opts.phi0.value_or(element.theta());
  double max_slope = 0.0;
  double r = 0.0;
  try {
    max_slope = slope_bounds(element, opts.grid_points).max_lift_slope;
    r = element.residual(phi);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::configuration) throw;
    rep.message = e.what();
    finish(rep, element, phi, false, SolveStatus::diverged);
    return rep;
  }
  rep.initial_residual = r;
  if (std::abs(r) <= opts.tol) {
    finish(rep, element, phi, true, SolveStatus::converged);
    return rep;
  }
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    const double rho = fixed_point_step(element, phi, max_slope, opts.epsilon);
    const double next = phi - rho * r;
    try {
      if (!std::isfinite(next)) throw Error(ErrorKind::domain, "non-finite iterate");
      r = element.residual(next);
    } catch (const Error& e) {
      rep.message = e.what();
      finish(rep, element, phi, false, SolveStatus::diverged);
      return rep;
    }
    if (next > phi) rep.monotone = false;
    rep.iterates.push_back(next);
    rep.residual_history.push_back(r);
    if (next == phi && std::abs(r) > opts.tol) {
      rep.message = "iterate stopped moving before reaching the tolerance";
      finish(rep, element, phi, false, SolveStatus::stalled);
      return rep;
    }
    phi = next;
    if (std::abs(r) <= opts.tol) {
      finish(rep, element, phi, true, SolveStatus::converged);
      return rep;
    }
  }
  rep.message = "maximum number of iterations reached";
  finish(rep, element, phi, false, SolveStatus::max_iter);
  return rep;
}

// ---------------------------------------------------------------------------
// Newton with bisection safeguard

SolveReport solve_newton(const BladeElement& element, const SolveOptions& opts) {
  opts.validate();
  SolveReport rep;
  rep.method = Method::newton;

  AngleInterval br = default_bracket(element, opts);
  double r_lo = std::numeric_limits<double>::quiet_NaN();
  double r_hi = std::numeric_limits<double>::quiet_NaN();
  bool bracketed = false;
  try {
    r_lo = element.residual(br.lo);
    r_hi = element.residual(br.hi);
    bracketed = !same_sign(r_lo, r_hi);
  } catch (const Error&) {
    bracketed = false;
  }

  double phi = opts.phi0.value_or(bracketed ? 0.5 * (br.lo + br.hi) : element.theta());
  if (bracketed && (phi < br.lo || phi > br.hi)) phi = 0.5 * (br.lo + br.hi);
  double r;
  try {
    r = element.residual(phi);
  } catch (const Error& e) {
    rep.message = e.what();
    finish(rep, element, phi, false, SolveStatus::diverged);
    return rep;
  }
  rep.initial_residual = r;
  if (std::abs(r) <= opts.tol) {
    finish(rep, element, phi, true, SolveStatus::converged);
    return rep;
  }

  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    if (bracketed) {
      if (same_sign(r, r_lo)) {
        br.lo = phi;
        r_lo = r;
      } else {
        br.hi = phi;
        r_hi = r;
      }
    }
    double next;
    try {
      const double slope = element.residual_prime(phi);
      next = phi - r / slope;
      const bool bad_slope = !(std::abs(slope) >= kTinySlope) || !std::isfinite(next);
      const bool outside = bracketed && !(next > br.lo && next < br.hi);
      if (bad_slope || outside) {
        if (!bracketed) throw Error(ErrorKind::domain, "vanishing slope without a bracket");
        next = 0.5 * (br.lo + br.hi);
        ++rep.fallback_steps;
      }
      if (next == phi) {
        rep.message = "iterate stopped moving before reaching the tolerance";
        finish(rep, element, phi, false, SolveStatus::stalled);
        return rep;
      }
      r = element.residual(next);
    } catch (const Error& e) {
      rep.message = e.what();
      finish(rep, element, phi, false, SolveStatus::diverged);
      return rep;
    }
    if (next > phi) rep.monotone = false;
    rep.iterates.push_back(next);
    rep.residual_history.push_back(r);
    phi = next;
    if (std::abs(r) <= opts.tol) {
      finish(rep, element, phi, true, SolveStatus::converged);
      return rep;
    }
  }
  rep.message = "maximum number of iterations reached";
  finish(rep, element, phi, false, SolveStatus::max_iter);
  return rep;
}

// ---------------------------------------------------------------------------
// Bisection

SolveReport solve_bisection(const BladeElement& element, const SolveOptions& opts) {
  opts.validate();
  SolveReport rep;
  rep.method = Method::bisection;
  const AngleInterval br = default_bracket(element, opts);
  if (br.empty()) throw Error(ErrorKind::empty_bracket, "bisection bracket is empty");

  const double r_lo0 = element.residual(br.lo);
  const double r_hi0 = element.residual(br.hi);
  if (same_sign(r_lo0, r_hi0)) {
    throw Error(ErrorKind::wrong_initial_guess,
                "wrong initial guess: residual has the same sign at both bracket ends (" +
                    fmt(r_lo0) + ", " + fmt(r_hi0) + ")");
  }
  rep.initial_residual = r_lo0;
  if (std::abs(r_lo0) <= opts.tol || std::abs(r_hi0) <= opts.tol) {
    finish(rep, element, std::abs(r_lo0) <= std::abs(r_hi0) ? br.lo : br.hi, true,
           SolveStatus::converged);
    return rep;
  }

  double lo = br.lo;
  double width = br.hi - br.lo;
  double r_lo = r_lo0;
  double mid = lo + 0.5 * width;
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    mid = lo + 0.5 * width;
    double r;
    try {
      r = element.residual(mid);
    } catch (const Error& e) {
      rep.message = e.what();
      finish(rep, element, mid, false, SolveStatus::diverged);
      return rep;
    }
    width *= 0.5;
    if (!rep.iterates.empty() && mid > rep.iterates.back()) rep.monotone = false;
    rep.iterates.push_back(mid);
    rep.residual_history.push_back(r);
    rep.widths.push_back(width);
    if (std::abs(r) <= opts.tol) {
      finish(rep, element, mid, true, SolveStatus::converged);
      return rep;
    }
    if (same_sign(r, r_lo)) {
      lo = mid;
      r_lo = r;
    }
    if (width <= opts.phi_tol) {
      rep.message = "bracket narrower than phi_tol but residual above tolerance";
      finish(rep, element, mid, false, SolveStatus::stalled);
      return rep;
    }
  }
  rep.message = "maximum number of iterations reached";
  finish(rep, element, mid, false, SolveStatus::max_iter);
  return rep;
}

SolveReport solve(Method method, const BladeElement& element, const SolveOptions& opts) {
  switch (method) {
    case Method::usual: return solve_usual(element, opts);
    case Method::fixed_point: return solve_fixed_point(element, opts);
    case Method::newton: return solve_newton(element, opts);
    case Method::bisection: return solve_bisection(element, opts);
  }
  throw Error(ErrorKind::internal, "unknown method");
}

// ---------------------------------------------------------------------------
// Bracketing through the uncorrected problem

AngleInterval bracket_via_psi0(const BladeElement& element, const SolveOptions& opts) {
  CorrectionSpec plain = element.correction();
  plain.variant = CorrectionVariant::none;
  const BladeElement base = element.with_correction(plain);

  const AngleInterval iplus = sampled_I_plus(element);
  SolveOptions o = opts;
  if (!o.bracket) o.bracket = AngleInterval{std::max(kBracketLow, iplus.lo), iplus.hi};
  double phi0;
  try {
    const SolveReport rep = solve_bisection(base, o);
    if (!rep.converged) throw Error(ErrorKind::unsolvable, rep.message);
    phi0 = rep.phi_star;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::wrong_initial_guess) throw;
    const RootSet set = scan_roots(base, 2000, o.tol);
    if (set.roots.empty()) {
      throw Error(ErrorKind::unsolvable, "problem without correction has no root in I+");
    }
    phi0 = set.roots.back().phi;
  }
  if (!(phi0 < iplus.hi)) {
    throw Error(ErrorKind::empty_bracket, "uncorrected root sits at the end of I+");
  }
  return {phi0, iplus.hi};
}

// ---------------------------------------------------------------------------
// Condition checks

bool CheckReport::all_passed() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& c) { return !c.applicable || c.passed; });
}

const CheckItem* CheckReport::find(std::string_view name) const {
  for (const auto& c : items) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

CheckReport check_existence(const BladeElement& element) {
  CheckReport rep;
  const double theta = element.theta();
  const double gamma = element.geometry().gamma;
  const double beta = element.polar().beta();

  CheckItem window{"window_nonempty"};
  window.margin = beta + gamma - (theta - numeric::pi / 2.0);
  window.passed = window.margin >= 0.0;
  window.detail = "beta + gamma - (theta - pi/2)";
  rep.items.push_back(window);

  CheckItem positive{"positive_window_nonempty"};
  positive.margin = beta + gamma;
  positive.passed = positive.margin > 0.0;
  positive.detail = "beta + gamma";
  rep.items.push_back(positive);

  const double top = std::min(theta, beta + gamma);
  CheckItem autosat{"max_I_plus_is_theta"};
  autosat.margin = beta + gamma - theta;
  autosat.passed = autosat.margin >= 0.0;
  autosat.detail = "beta + gamma - theta";
  rep.items.push_back(autosat);

  CheckItem simple{"simplified_sign"};
  CheckItem corrected{"corrected_sign"};
  if (!window.passed || !(top > 0.0)) {
    simple.applicable = corrected.applicable = false;
    simple.detail = corrected.detail = "I+ is empty";
  } else {
    try {
      simple.margin = element.mu_L(top) - mu_G(theta, top);
      simple.passed = simple.margin >= 0.0;
      simple.detail = "mu_L - mu_G at max I+";
    } catch (const Error& e) {
      simple.applicable = false;
      simple.detail = e.what();
    }
    try {
      corrected.margin = element.residual(top);
      corrected.passed = corrected.margin >= 0.0;
      corrected.detail = "mu_L^c - tan(theta - phi) mu_D^c - mu_G^c at max I+";
    } catch (const Error& e) {
      corrected.applicable = false;
      corrected.detail = e.what();
    }
  }
  rep.items.push_back(simple);
  rep.items.push_back(corrected);

  CheckItem symmetric{"symmetric_positive_lift_root"};
  try {
    const double cl0 = element.polar().cl(0.0);
    symmetric.applicable = std::abs(cl0) < 1e-12 && gamma > 0.0;
    symmetric.passed = symmetric.applicable && simple.applicable && simple.passed;
    symmetric.margin = simple.margin;
    symmetric.detail = symmetric.applicable
                           ? "root of the simplified model in [gamma, max I+]"
                           : "needs a symmetric profile and positive twist";
  } catch (const Error& e) {
    symmetric.applicable = false;
    symmetric.detail = e.what();
  }
  rep.items.push_back(symmetric);
  return rep;
}

CheckReport check_contraction_conditions(const BladeElement& element, std::size_t grid_points) {
  CheckReport rep;
  const BladeElement plain = element.with_correction(CorrectionSpec::simplified());
  const double theta = plain.theta();
  const double gamma = plain.geometry().gamma;
  const double lambda = plain.geometry().lambda;

  auto not_applicable = [&](const std::string& why) {
    for (const char* n : {"max_I_plus_is_theta", "lift_nondecreasing", "stability",
                          "contraction_slope", "contraction_value"}) {
      CheckItem c{n};
      c.applicable = false;
      c.detail = why;
      rep.items.push_back(c);
    }
    return rep;
  };
  if (!(gamma > 0.0)) return not_applicable("needs positive twist");
  if (!(gamma < theta)) return not_applicable("needs gamma < theta");

  const double s = std::sin(gamma);
  const double h = (lambda / std::tan(gamma) + 1.0) / s;
  const double hp = -lambda * (1.0 + std::cos(gamma) * std::cos(gamma)) / (s * s * s) -
                    std::cos(gamma) / (s * s);

  CheckItem top{"max_I_plus_is_theta"};
  top.margin = plain.polar().beta() + gamma - theta;
  top.passed = top.margin >= 0.0;
  top.detail = "beta + gamma - theta";
  rep.items.push_back(top);

  SlopeBounds b;
  try {
    b = slope_bounds(plain, grid_points);
  } catch (const Error& e) {
    rep.items.clear();
    return not_applicable(e.what());
  }
  CheckItem mono{"lift_nondecreasing"};
  mono.passed = b.lift_nondecreasing;
  mono.margin = b.min_lift_slope;
  mono.detail = "smallest sampled lift slope over I+";
  rep.items.push_back(mono);

  CheckItem stab{"stability"};
  try {
    stab.margin = mu_G(theta, gamma) - plain.mu_L(theta);
    stab.passed = stab.margin >= 0.0;
    stab.detail = "mu_G(gamma) - mu_L(theta)";
  } catch (const Error& e) {
    stab.applicable = false;
    stab.detail = e.what();
  }
  rep.items.push_back(stab);

  CheckItem c1{"contraction_slope"};
  const double v1 = std::sin(theta) * b.max_lift_slope * h;
  c1.margin = 1.0 - v1;
  c1.passed = v1 <= 1.0;
  c1.detail = "sin(theta) max mu_L' h(gamma) = " + fmt(v1);
  rep.items.push_back(c1);

  CheckItem c2{"contraction_value"};
  const double v2 = std::sin(theta) * b.max_lift * std::abs(hp);
  c2.margin = 1.0 - v2;
  c2.passed = v2 <= 1.0;
  c2.detail = "sin(theta) max mu_L |h'(gamma)| = " + fmt(v2);
  rep.items.push_back(c2);
  return rep;
}

CheckReport check_fixed_point_hypotheses(const BladeElement& element,
                                         std::size_t grid_points) {
  CheckReport rep;
  const double theta = element.theta();

  CheckItem nocorr{"no_high_induction_correction"};
  nocorr.passed = element.correction().variant == CorrectionVariant::none;
  nocorr.margin = nocorr.passed ? 0.0 : -1.0;
  rep.items.push_back(nocorr);

  CheckItem top{"max_I_plus_is_theta"};
  top.margin = element.polar().beta() + element.geometry().gamma - theta;
  top.passed = top.margin >= 0.0;
  rep.items.push_back(top);

  SlopeBounds b;
  try {
    b = slope_bounds(element, grid_points);
  } catch (const Error& e) {
    CheckItem bad{"sampling"};
    bad.detail = e.what();
    rep.items.push_back(bad);
    return rep;
  }
  CheckItem lift{"lift_nondecreasing"};
  lift.passed = b.lift_nondecreasing;
  lift.margin = b.min_lift_slope;
  rep.items.push_back(lift);

  CheckItem drag{"drag_nondecreasing"};
  drag.passed = b.drag_nondecreasing;
  drag.margin = b.min_drag_slope;
  rep.items.push_back(drag);

  CheckItem rate{"rate_condition"};
  rate.margin = b.min_lift_slope - std::tan(theta) * (1.0 + b.max_drag_slope);
  rate.passed = rate.margin > 0.0;
  rate.applicable = true;
  rate.detail = "min mu_L^c' - tan(theta)(1 + max mu_D^c')";
  rep.items.push_back(rate);
  return rep;
}

// ---------------------------------------------------------------------------
// Root scanning

RootCategory classify_root(const BladeElement& element, const FlowState& state) {
  if (state.lift_sign < 0) return RootCategory::negative_lift_branch;
  if (state.alpha >= element.polar().alpha_s()) return RootCategory::stall_branch;
  const auto& corr = element.correction();
  if (corr.variant != CorrectionVariant::none && state.a > corr.a_c) {
    return RootCategory::correction_branch;
  }
  return RootCategory::principal;
}

RootSet scan_roots(const BladeElement& element, std::size_t grid_size, double tol) {
  if (grid_size < 100) throw Error(ErrorKind::configuration, "scan grid needs >= 100 points");
  RootSet set;
  AngleInterval range = element.evaluation_range();
  if (!element.admits_nonpositive_phi() || !element.correction().is_simplified()) {
    range.lo = std::max(range.lo, 1e-6 * element.theta());
  }
  set.scanned = range;
  if (range.empty()) return set;

  const auto grid = numeric::linspace(range.lo, range.hi, grid_size);
  std::vector<double> values(grid.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      values[i] = element.residual(grid[i]);
    } catch (const Error&) {
    }
  }

  std::vector<double> found;
  auto residual = [&](double x) { return element.residual(x); };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] == 0.0) {
      found.push_back(grid[i]);
      continue;
    }
    if (i + 1 == grid.size()) break;
    const double v0 = values[i];
    const double v1 = values[i + 1];
    if (!std::isfinite(v0) || !std::isfinite(v1) || v1 == 0.0 || same_sign(v0, v1)) continue;
    const auto res = numeric::bisect(residual, grid[i], grid[i + 1], 0.0);
    double r;
    try {
      r = element.residual(res.root);
    } catch (const Error&) {
      continue;
    }
    if (std::abs(r) <= tol) {
      found.push_back(res.root);
    } else {
      ++set.discontinuities;
    }
  }

  std::sort(found.begin(), found.end());
  for (double phi : found) {
    if (!set.roots.empty() && std::abs(phi - set.roots.back().phi) < 1e-10) continue;
    Root root;
    root.phi = phi;
    root.state = element.recover_induction(phi);
    root.lift_sign = root.state.lift_sign;
    root.category = classify_root(element, root.state);
    set.roots.push_back(root);
  }
  return set;
}

}  // namespace bem
