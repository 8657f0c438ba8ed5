#include "bem/design.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "bem/error.hpp"
#include "bem/numeric.hpp"

namespace bem {

namespace {

using numeric::pi;

struct Coefficients {
  double cl = 0.0;
  double cd = 0.0;
  double dcl = 0.0;
  double dcd = 0.0;
};

Coefficients coefficients(const BladeElement& element, double alpha) {
  const auto& polar = element.polar();
  Coefficients c;
  c.cl = polar.cl(alpha);
  c.dcl = polar.cl_prime(alpha);
  if (element.correction().drag) {
    c.cd = polar.cd(alpha);
    c.dcd = polar.cd_prime(alpha);
  }
  return c;
}

bool solve3(const std::array<std::array<double, 3>, 3>& M, const std::array<double, 3>& b,
            std::array<double, 3>& x) {
  std::array<std::array<double, 4>, 3> A{};
  double norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      A[i][j] = M[i][j];
      norm = std::max(norm, std::abs(M[i][j]));
    }
    A[i][3] = b[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    if (!(std::abs(A[piv][col]) > 1e-14 * norm)) return false;
    std::swap(A[col], A[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
    }
  }
  for (int i = 2; i >= 0; --i) {
    double s = A[i][3];
    for (int k = i + 1; k < 3; ++k) s -= A[i][k] * x[k];
    x[i] = s / A[i][i];
  }
  return true;
}

}  // namespace

ClosedForms simplified_closed_forms(double theta, double phi) {
  if (!(phi > 0.0 && phi <= theta && theta < pi / 2.0)) {
    std::ostringstream msg;
    msg << "closed forms need 0 < phi <= theta < pi/2 (theta=" << theta << ", phi=" << phi
        << ")";
    throw Error(ErrorKind::domain, msg.str());
  }
  ClosedForms out;
  out.a = 1.0 - std::sin(phi) * std::cos(theta - phi) / std::sin(theta);
  out.a_prime = std::sin(phi) * std::sin(theta - phi) / std::cos(theta);
  out.J = std::sin(phi) * std::sin(phi) * std::sin(2.0 * (theta - phi)) / std::sin(2.0 * theta);
  return out;
}

DesignPoint simplified_optimum(double lambda, const PolarTable& polar,
                               const TurbineConfig& turbine) {
  const double alpha_bar = best_glide_angle(polar);
  const double cl = polar.cl(alpha_bar);
  if (!(cl > 0.0)) {
    throw Error(ErrorKind::no_positive_lift, "lift at the best glide angle is not positive");
  }
  const double theta = std::atan(1.0 / lambda);
  DesignPoint d;
  d.lambda = lambda;
  d.phi_opt = 2.0 * theta / 3.0;
  d.gamma = d.phi_opt - alpha_bar;
  d.chord = 8.0 * pi * turbine.radius_at(lambda) * mu_G(theta, d.phi_opt) /
            (turbine.blade_count * cl);
  d.J = simplified_closed_forms(theta, d.phi_opt).J;
  return d;
}

FlowState operating_point(const BladeElement& element) {
  const AngleInterval br = default_bracket(element, SolveOptions{});
  auto residual = [&](double x) { return element.residual(x); };
  bool bracketed = false;
  try {
    if (!br.empty()) {
      const double r_lo = element.residual(br.lo);
      const double r_hi = element.residual(br.hi);
      bracketed = (r_lo <= 0.0) != (r_hi <= 0.0) || r_lo == 0.0 || r_hi == 0.0;
    }
  } catch (const Error&) {
    bracketed = false;
  }
  if (bracketed) {
    const auto res = numeric::bisect(residual, br.lo, br.hi, 0.0);
    if (std::abs(element.residual(res.root)) <= 1e-10) {
      return element.recover_induction(res.root);
    }
  }
  const RootSet set = scan_roots(element, 400);
  for (auto it = set.roots.rbegin(); it != set.roots.rend(); ++it) {
    if (it->lift_sign > 0) return it->state;
  }
  throw Error(ErrorKind::unsolvable, "no positive-lift root for this element");
}

double J_lambda(const BladeElement& element, const FlowState& state) {
  const Coefficients c = coefficients(element, state.phi - element.geometry().gamma);
  const double base = state.tip_factor * state.a_prime * (1.0 - state.a);
  if (c.cd == 0.0) return base;
  if (c.cl == 0.0) {
    throw Error(ErrorKind::invalid_design, "lift vanishes at the operating angle of attack");
  }
  return base * (1.0 - c.cd / c.cl / std::tan(state.phi));
}

AdjointState assemble_adjoint(const BladeElement& element, const FlowState& state,
                              AdjointForm form, double weight) {
  const double phi = state.phi;
  const double a = state.a;
  const double ap = state.a_prime;
  const double lambda = element.geometry().lambda;
  const double chord = element.geometry().chord;
  const double gamma = element.geometry().gamma;
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double t = std::tan(phi);
  const double nu = 1.0 - a;

  const double F = element.tip_factor(phi);
  const double dF = element.tip_factor_prime(phi);
  const double ml = element.mu_L_c(phi);
  const double md = element.mu_D_c(phi);
  const double dml = element.mu_L_c_prime(phi);
  const double dmd = element.mu_D_c_prime(phi);
  const Coefficients co = coefficients(element, phi - gamma);
  if (co.cl == 0.0) {
    throw Error(ErrorKind::invalid_design, "lift vanishes at the operating angle of attack");
  }
  const double ratio = co.cd / co.cl;
  const double dratio = (co.dcd * co.cl - co.dcl * co.cd) / (co.cl * co.cl);
  const double factor = 1.0 - ratio / t;

  const auto& corr = element.correction();
  const double x = std::max(0.0, a - corr.threshold());
  const PsiValue ps = psi_excess(corr, x, element.psi_tip_factor(phi));
  const double dFpsi = element.psi_tip_factor_prime(phi);

  // Balance right-hand sides and their phi-derivatives.
  const double R = (ml * c + md * s) / (s * s);
  const double S = (ml * s - md * c) / (lambda * s * s);
  const double dR = (dml * c - ml * s + dmd * s + md * c) / (s * s) -
                    2.0 * c * (ml * c + md * s) / (s * s * s);
  const double dS = ((dml * s + ml * c - dmd * c + md * s) / (s * s) -
                     2.0 * c * (ml * s - md * c) / (s * s * s)) /
                    lambda;

  // mu^c derivatives with respect to the twist.
  const double sigma4F = element.solidity() / (4.0 * F);
  const double dml_g = -sigma4F * co.dcl;
  const double dmd_g = -sigma4F * co.dcd;

  AdjointState st;
  st.J = F * ap * nu * factor;
  st.at_threshold = corr.variant != CorrectionVariant::none && std::abs(a - corr.a_c) < 1e-9;

  double dJ_gamma = 0.0;
  if (form == AdjointForm::consistent) {
    st.M[0] = {1.0 / (c * c), -dR + ps.dF * dFpsi / (nu * nu), -dS};
    st.M[1] = {1.0 / (lambda * (1.0 + ap)),
               (1.0 + ps.dx) / (nu * nu) + 2.0 * ps.value / (nu * nu * nu), ap / (nu * nu)};
    st.M[2] = {nu / (lambda * (1.0 + ap) * (1.0 + ap)), 0.0, 1.0 / nu};
    st.b = {weight * (dF * ap * nu * factor + F * ap * nu * (-dratio / t + ratio / (s * s))),
            weight * (-F * ap * factor), weight * (F * nu * factor)};
    dJ_gamma = F * ap * nu * dratio / t;
  } else {
    const double cot2 = 1.0 / (t * t);
    st.M[0] = {1.0 / (c * c), (md - dml) / (s * t) + (ml * (1.0 - 2.0 * cot2) - dmd) / s,
               (ml + dmd) / (lambda * s * t) - (dml + md * (1.0 + 2.0 * cot2)) / (lambda * s)};
    st.M[1] = {-1.0 / (lambda * (1.0 + ap)),
               (1.0 + ps.dx) / (nu * nu) + 2.0 * ps.value / (nu * nu * nu), ap / (nu * nu)};
    st.M[2] = {nu / (lambda * (1.0 + ap) * (1.0 + ap)), 0.0, 1.0 / nu};
    const double drag_term = (1.0 - co.cd) / (co.cl * t);
    st.b = {weight * (F * (ap * nu * (co.dcl * co.cd - co.dcd * co.cl) / (co.cl * co.cl * t) +
                           co.cd / (co.cl * s * s)) +
                      dF * ap * nu * drag_term),
            weight * F * (-ap * drag_term), weight * F * nu * drag_term};
    dJ_gamma = ap * nu * dratio / t;
  }

  if (!solve3(st.M, st.b, st.p)) {
    throw Error(ErrorKind::adjoint_singular, "multiplier system is singular");
  }
  for (int i = 0; i < 3; ++i) {
    double r = -st.b[i];
    for (int j = 0; j < 3; ++j) r += st.M[i][j] * st.p[j];
    st.solve_residual = std::max(st.solve_residual, std::abs(r));
  }

  const double p2 = st.p[1];
  const double p3 = st.p[2];
  st.grad[0] = weight * dJ_gamma + p2 * (dml_g * c + dmd_g * s) / (s * s) +
               p3 * (dml_g * s - dmd_g * c) / (lambda * s * s);
  st.grad[1] = p2 * R / chord + p3 * S / chord;
  return st;
}

std::array<double, 2> gradient(const BladeElement& element, AdjointForm form) {
  const FlowState state = operating_point(element);
  return assemble_adjoint(element, state, form).grad;
}

OptimizeResult optimize_element(const BladeElement& start, const OptimizeOptions& opts) {
  if (!(opts.kappa > 0.0)) throw Error(ErrorKind::configuration, "optimizer: kappa must be positive");
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::configuration, "optimizer: tol must be positive");

  struct Eval {
    double J = 0.0;
    std::array<double, 2> grad{};
    double phi = 0.0;
  };
  auto evaluate = [&](double gamma, double chord) {
    const BladeElement el = start.with_design(gamma, chord);
    const FlowState st = operating_point(el);
    if (std::abs(st.alpha) > el.polar().beta()) {
      throw Error(ErrorKind::invalid_design, "operating angle of attack leaves the validity window");
    }
    const AdjointState adj = assemble_adjoint(el, st, opts.form);
    return Eval{adj.J, adj.grad, st.phi};
  };
  auto norm = [](const std::array<double, 2>& g) { return std::hypot(g[0], g[1]); };

  OptimizeResult res;
  double gamma = start.geometry().gamma;
  double chord = start.geometry().chord;
  Eval cur;
  try {
    cur = evaluate(gamma, chord);
  } catch (const Error& e) {
    throw Error(ErrorKind::invalid_design,
                std::string("optimizer: initial design cannot be solved: ") + e.what());
  }
  res.initial = {start.geometry().lambda, gamma, chord, cur.phi, cur.J};
  res.best = res.initial;
  res.steps = 1;

  double kappa = opts.kappa;
  while (res.steps < opts.max_steps) {
    res.grad_norm = norm(cur.grad);
    if (res.grad_norm <= opts.tol) {
      res.converged = true;
      break;
    }
    const double g_try = gamma + kappa * cur.grad[0];
    const double c_try = chord + kappa * cur.grad[1];
    bool accepted = false;
    if (c_try > 0.0 && std::abs(g_try) < pi / 2.0) {
      try {
        const Eval next = evaluate(g_try, c_try);
        ++res.steps;
        if (next.J >= cur.J) {
          gamma = g_try;
          chord = c_try;
          cur = next;
          accepted = true;
        }
      } catch (const Error&) {
        ++res.steps;
      }
    }
    if (accepted) {
      ++res.accepted;
      res.history.push_back(cur.J);
      res.best = {start.geometry().lambda, gamma, chord, cur.phi, cur.J};
      kappa *= 2.0;
    } else {
      kappa *= 0.5;
      if (kappa < 1e-14 * opts.kappa) {
        res.message = "step became negligible before the gradient tolerance was met";
        break;
      }
    }
  }
  res.grad_norm = norm(cur.grad);
  res.converged = res.grad_norm <= opts.tol;
  if (!res.converged && res.message.empty()) res.message = "maximum number of steps reached";
  return res;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double power_coefficient(const std::vector<double>& lambda, const std::vector<double>& J,
                         double lambda_max) {
  if (lambda.size() != J.size() || lambda.size() < 2) {
    throw Error(ErrorKind::validation, "power coefficient needs matching grids of >= 2 nodes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < lambda.size(); ++i) {
    const double f0 = lambda[i] * lambda[i] * lambda[i] * J[i];
    const double f1 = lambda[i + 1] * lambda[i + 1] * lambda[i + 1] * J[i + 1];
    sum += 0.5 * (lambda[i + 1] - lambda[i]) * (f0 + f1);
  }
  return 8.0 / (lambda_max * lambda_max) * sum;
}

SweepResult cp_sweep(const TurbineConfig& turbine, const PolarTable& polar,
                     const CorrectionSpec& corr, const DesignLaw& design, std::size_t grid_n,
                     std::size_t jobs) {
  turbine.validate();
  if (grid_n < 2) throw Error(ErrorKind::configuration, "sweep needs at least 2 grid points");
  SweepResult out;
  out.lambda_grid = numeric::linspace(turbine.lambda_min, turbine.lambda_max, grid_n);
  out.elements.resize(grid_n);

  parallel_for(grid_n, jobs, [&](std::size_t i) {
    SweepElement& el = out.elements[i];
    el.lambda = out.lambda_grid[i];
    try {
      const auto gc = design(el.lambda);
      el.design.lambda = el.lambda;
      el.design.gamma = gc[0];
      el.design.chord = gc[1];
      const BladeElement element(
          ElementGeometry::place(turbine, el.lambda, gc[0], gc[1]), polar, corr);
      el.state = operating_point(element);
      el.design.phi_opt = el.state.phi;
      el.J = J_lambda(element, el.state);
      el.design.J = el.J;
      el.valid = std::isfinite(el.J);
      if (!el.valid) {
        el.J = 0.0;
        el.message = "non-finite power density";
      }
    } catch (const Error& e) {
      el.valid = false;
      el.J = 0.0;
      el.message = e.what();
    }
  });

  std::vector<double> J(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    J[i] = out.elements[i].J;
    if (!out.elements[i].valid) ++out.failures;
  }
  if (out.failures == grid_n) {
    throw Error(ErrorKind::unsolvable, "every element of the sweep failed: " +
                                           out.elements.front().message);
  }
  out.Cp = power_coefficient(out.lambda_grid, J, turbine.lambda_max);
  return out;
}

Landscape landscape(const BladeElement& element, std::array<double, 2> gamma_range,
                    std::array<double, 2> chord_range, std::size_t resolution,
                    std::size_t jobs) {
  if (resolution < 16) {
    throw Error(ErrorKind::configuration, "landscape needs at least 16 points per axis");
  }
  if (!(gamma_range[0] < gamma_range[1]) || !(chord_range[0] < chord_range[1]) ||
      !(chord_range[0] > 0.0)) {
    throw Error(ErrorKind::configuration, "landscape ranges must be increasing, chords positive");
  }
  Landscape out;
  out.gammas = numeric::linspace(gamma_range[0], gamma_range[1], resolution);
  out.chords = numeric::linspace(chord_range[0], chord_range[1], resolution);
  out.cells.resize(resolution * resolution);
  parallel_for(out.cells.size(), jobs, [&](std::size_t k) {
    LandscapeCell& cell = out.cells[k];
    cell.gamma = out.gammas[k / resolution];
    cell.chord = out.chords[k % resolution];
    try {
      const BladeElement el = element.with_design(cell.gamma, cell.chord);
      const RootSet roots = scan_roots(el, 400);
      cell.multiple_roots = roots.roots.size() > 1;
      const FlowState st = operating_point(el);
      cell.J = J_lambda(el, st);
      cell.valid = std::isfinite(cell.J);
    } catch (const Error&) {
      cell.valid = false;
    }
  });
  return out;
}

}  // namespace bem
