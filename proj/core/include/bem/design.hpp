#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bem/model.hpp"
#include "bem/solvers.hpp"

namespace bem {

struct ClosedForms {
  double a = 0.0;
  double a_prime = 0.0;
  double J = 0.0;
};

/// Induction factors and power density of the drag-free, uncorrected model
/// written as functions of phi alone (valid for 0 < phi <= theta < pi/2).
ClosedForms simplified_closed_forms(double theta, double phi);

struct DesignPoint {
  double lambda = 0.0;
  double gamma = 0.0;
  double chord = 0.0;
  double phi_opt = 0.0;
  double J = 0.0;
};

/// Twist and chord maximising the power density of the simplified model at
/// speed ratio `lambda`, operating at the best glide angle.
DesignPoint simplified_optimum(double lambda, const PolarTable& polar,
                               const TurbineConfig& turbine);

/// Operating state used by the design tools: bisection over the default
/// bracket refined to machine precision, or the largest positive-lift root
/// of a scan when the bracket does not change sign.
FlowState operating_point(const BladeElement& element);

/// Element power density F a' (1 - a) (1 - (C_D / C_L) cot phi).
double J_lambda(const BladeElement& element, const FlowState& state);

enum class AdjointForm {
  consistent,  // derivatives of the constraints as they are solved
  expanded,    // hand-expanded matrix and right-hand side; disagrees with finite differences
};

struct AdjointState {
  std::array<std::array<double, 3>, 3> M{};  // row: variable (phi, a, a'), column: equation
  std::array<double, 3> b{};
  std::array<double, 3> p{};
  std::array<double, 2> grad{};  // (d/d gamma, d/d chord)
  double J = 0.0;
  double solve_residual = 0.0;   // max |M p - b|
  bool at_threshold = false;     // a sits on a_c, one-sided derivative used
};

/// Assembles and solves the multiplier system at a converged state and
/// evaluates the gradient of `weight * J` with respect to twist and chord.
AdjointState assemble_adjoint(const BladeElement& element, const FlowState& state,
                              AdjointForm form = AdjointForm::consistent,
                              double weight = 1.0);

/// Gradient of J at the element's current twist and chord.
std::array<double, 2> gradient(const BladeElement& element,
                               AdjointForm form = AdjointForm::consistent);

struct OptimizeOptions {
  double kappa = 1e-2;        // initial step
  double tol = 1e-6;          // on the gradient norm
  std::size_t max_steps = 10000;
  AdjointForm form = AdjointForm::consistent;
};

struct OptimizeResult {
  DesignPoint best;
  DesignPoint initial;
  std::size_t steps = 0;           // gradient evaluations
  std::size_t accepted = 0;        // steps that were taken
  double grad_norm = 0.0;
  bool converged = false;
  std::vector<double> history;     // J after each accepted step
  std::string message;
};

/// Gradient ascent on (gamma, chord). The step doubles after each accepted
/// move and halves whenever a trial lowers J or cannot be solved. Designs
/// whose operating angle of attack leaves [-beta, beta] count as unsolvable.
OptimizeResult optimize_element(const BladeElement& start, const OptimizeOptions& opts = {});

/// Twist and chord as a function of the speed ratio.
using DesignLaw = std::function<std::array<double, 2>(double lambda)>;

struct SweepElement {
  double lambda = 0.0;
  DesignPoint design;
  FlowState state;
  double J = 0.0;
  bool valid = false;
  std::string message;
};

struct SweepResult {
  std::vector<double> lambda_grid;
  std::vector<SweepElement> elements;
  double Cp = 0.0;
  std::size_t failures = 0;
};

/// Power coefficient (8 / lambda_max^2) * integral of lambda^3 J over
/// [lambda_min, lambda_max], composite trapezoid on `grid_n` uniform nodes.
/// Elements are solved independently on up to `jobs` threads; the sum is
/// always formed left to right. Failed elements contribute zero.
SweepResult cp_sweep(const TurbineConfig& turbine, const PolarTable& polar,
                     const CorrectionSpec& corr, const DesignLaw& design, std::size_t grid_n,
                     std::size_t jobs = 1);

/// Trapezoid rule for lambda^3 J on the given nodes, scaled to a power
/// coefficient.
double power_coefficient(const std::vector<double>& lambda, const std::vector<double>& J,
                         double lambda_max);

struct LandscapeCell {
  double gamma = 0.0;
  double chord = 0.0;
  double J = 0.0;
  bool valid = false;
  bool multiple_roots = false;
};

struct Landscape {
  std::vector<double> gammas;
  std::vector<double> chords;
  std::vector<LandscapeCell> cells;  // row-major: gamma index outer
  const LandscapeCell& at(std::size_t ig, std::size_t ic) const {
    return cells[ig * chords.size() + ic];
  }
};

Landscape landscape(const BladeElement& element, std::array<double, 2> gamma_range,
                    std::array<double, 2> chord_range, std::size_t resolution,
                    std::size_t jobs = 1);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace bem
