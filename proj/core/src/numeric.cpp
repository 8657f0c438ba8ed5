#include "bem/numeric.hpp"

#include <algorithm>
#include <utility>

#include "bem/error.hpp"

namespace bem::numeric {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) {
    throw Error(ErrorKind::validation, "linspace needs at least two points");
  }
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + step * static_cast<double>(i);
  }
  out.back() = hi;
  return out;
}

BisectionResult bisect(const std::function<double(double)>& f, double lo,
                       double hi, double xtol, std::size_t max_iter) {
  BisectionResult res;
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) {
    res.root = lo;
    res.converged = true;
    return res;
  }
  if (fhi == 0.0) {
    res.root = hi;
    res.converged = true;
    return res;
  }
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw Error(ErrorKind::empty_bracket, "bisect: no sign change on bracket");
  }
  for (; res.iterations < max_iter; ++res.iterations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= xtol || mid == lo || mid == hi) {
      res.converged = true;
      break;
    }
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      res.converged = true;
      break;
    }
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  res.root = lo + 0.5 * (hi - lo);
  return res;
}

double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double xtol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > xtol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
    if (c >= d) break;
  }
  return 0.5 * (lo + hi);
}

int solve_quadratic(double c2, double c1, double c0, double& r0, double& r1) {
  if (c2 == 0.0) {
    if (c1 == 0.0) return 0;
    r0 = r1 = -c0 / c1;
    return 1;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
  if (q == 0.0) {
    r0 = r1 = 0.0;
    return 2;
  }
  r0 = q / c2;
  r1 = c0 / q;
  if (r0 > r1) std::swap(r0, r1);
  return 2;
}

}  // namespace bem::numeric
