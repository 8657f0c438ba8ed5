#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace bem::numeric {

inline constexpr double pi = 3.14159265358979323846;

/// `n` evenly spaced points from `lo` to `hi` inclusive (n >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t n);

struct BisectionResult {
  double root = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Plain interval halving on [lo, hi]; requires f(lo) and f(hi) of opposite
/// sign (or one of them zero). Stops when the bracket is narrower than `xtol`.
BisectionResult bisect(const std::function<double(double)>& f, double lo,
                       double hi, double xtol, std::size_t max_iter = 400);

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double xtol = 1e-12);

/// Roots of c2 x^2 + c1 x + c0 = 0 computed without catastrophic
/// cancellation. Returns the number of real roots written to r0 <= r1.
int solve_quadratic(double c2, double c1, double c0, double& r0, double& r1);

}  // namespace bem::numeric
