#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bem/model.hpp"

namespace bem {

enum class Method { usual, fixed_point, newton, bisection };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

struct SolveOptions {
  double tol = 1e-10;               // on |residual|
  std::size_t max_iter = 10000;
  double epsilon = 1.0;             // damping of the fixed-point step
  std::optional<double> phi0;       // fixed point / Newton start; defaults to theta
  std::optional<AngleInterval> bracket;  // defaults to [1e-4, theta]
  double phi_tol = 1e-12;           // bracket width at which bisection stops
  std::size_t grid_points = 1000;   // sampling of I+ for slope bounds

  void validate() const;
};

/// Bracket used when none is given, clipped to where the residual is
/// defined.
AngleInterval default_bracket(const BladeElement& element, const SolveOptions& opts);

enum class SolveStatus { converged, max_iter, diverged, stalled };

std::string_view to_string(SolveStatus s) noexcept;

struct SolveReport {
  Method method = Method::usual;
  SolveStatus status = SolveStatus::max_iter;
  bool converged = false;
  double phi_star = 0.0;
  FlowState state;
  std::size_t iterations = 0;
  std::optional<double> initial_residual;
  std::vector<double> iterates;          // phi after each iteration
  std::vector<double> residual_history;  // residual at each iterate
  std::vector<double> widths;            // bisection: bracket width per iteration
  bool monotone = true;                  // iterates never increased
  std::size_t fallback_steps = 0;        // Newton: bisection steps taken
  std::string message;
};

/// Classic alternating iteration: angle from the induction factors, then
/// the axial and angular balances. Starts from a = a' = 0 unless `phi0` is
/// given, in which case the factors are first taken from the balances at
/// phi0.
SolveReport solve_usual(const BladeElement& element, const SolveOptions& opts = {});

/// Damped residual iteration phi <- phi - rho(phi) r(phi), with the step
/// bounded through the largest lift slope over I+.
SolveReport solve_fixed_point(const BladeElement& element, const SolveOptions& opts = {});

/// Newton on the residual, kept inside a sign-changing bracket when one is
/// available; steps that leave it or have a vanishing slope are replaced by
/// bisection.
SolveReport solve_newton(const BladeElement& element, const SolveOptions& opts = {});

/// Interval halving. Throws ErrorKind::wrong_initial_guess when the bracket
/// ends share a sign.
SolveReport solve_bisection(const BladeElement& element, const SolveOptions& opts = {});

SolveReport solve(Method method, const BladeElement& element, const SolveOptions& opts = {});

/// Step factor of the damped iteration at phi, given the precomputed
/// largest lift slope.
double fixed_point_step(const BladeElement& element, double phi, double max_lift_slope,
                        double epsilon);

struct SlopeBounds {
  double min_lift_slope = 0.0;
  double max_lift_slope = 0.0;
  double min_drag_slope = 0.0;
  double max_drag_slope = 0.0;
  double max_lift = 0.0;
  bool lift_nondecreasing = true;
  bool drag_nondecreasing = true;
};

/// Extremes of mu_L^c, mu_L^c' and mu_D^c' on a uniform grid of I+
/// (the open lower end excluded).
SlopeBounds slope_bounds(const BladeElement& element, std::size_t grid_points = 1000);

/// Contraction factor for the damped iteration when the lift slope
/// dominates; empty when that condition fails.
std::optional<double> fixed_point_rate_bound(const BladeElement& element,
                                             std::size_t grid_points = 1000);

/// Solves the problem without the high-induction correction and returns
/// (phi0, max I+], which brackets a root of the corrected problem.
AngleInterval bracket_via_psi0(const BladeElement& element, const SolveOptions& opts = {});

struct CheckItem {
  CheckItem() = default;
  explicit CheckItem(std::string item_name) : name(std::move(item_name)) {}

  std::string name;
  bool applicable = true;
  bool passed = false;
  double margin = 0.0;   // >= 0 when the inequality holds
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool all_passed() const;
  const CheckItem* find(std::string_view name) const;
};

/// Existence criteria: non-empty window, simplified and corrected sign
/// conditions at max I+, and whether max I+ = theta.
CheckReport check_existence(const BladeElement& element);

/// Conditions under which the classic iteration of the simplified model is
/// a contraction of [gamma, theta].
CheckReport check_contraction_conditions(const BladeElement& element,
                                      std::size_t grid_points = 1000);

/// Hypotheses of the monotone convergence result for the damped iteration.
CheckReport check_fixed_point_hypotheses(const BladeElement& element,
                                         std::size_t grid_points = 1000);

enum class RootCategory { principal, negative_lift_branch, stall_branch, correction_branch };

std::string_view to_string(RootCategory c) noexcept;

struct Root {
  double phi = 0.0;
  FlowState state;
  int lift_sign = 0;
  RootCategory category = RootCategory::principal;
};

struct RootSet {
  std::vector<Root> roots;           // ascending in phi
  AngleInterval scanned;
  std::size_t discontinuities = 0;   // sign changes that were jumps, not roots
};

/// Residual sign changes on a uniform grid of the evaluation range, refined
/// by bisection and classified.
RootSet scan_roots(const BladeElement& element, std::size_t grid_size = 2000,
                   double tol = 1e-10);

RootCategory classify_root(const BladeElement& element, const FlowState& state);

}  // namespace bem
