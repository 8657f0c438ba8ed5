#pragma once

#include <bem/design.hpp>
#include <bem/model.hpp>
#include <bem/polar.hpp>

#include <cmath>
#include <functional>
#include <random>

namespace bem::fixtures {

inline TurbineConfig small_rotor() {
  TurbineConfig t;
  t.blade_count = 3;
  t.radius = 1.0;
  t.upstream_speed = 10.0;
  t.rotation_speed = 20.0;
  t.lambda_min = 0.2;
  t.lambda_max = 2.0;
  return t;
}

// cl = 2 pi alpha, cd = cd0 + cd2 alpha^2, sampled densely on a wide range
// so the classic iteration can start at phi = theta.
inline PolarTable thin_airfoil(double cd0 = 0.01, double cd2 = 0.1, double beta = 0.5) {
  SyntheticParams p;
  p.cd0 = cd0;
  p.cd2 = cd2;
  p.alpha_min = -1.2;
  p.alpha_max = 1.2;
  p.beta = beta;
  p.step = 0.0025;
  return synthetic_polar(SyntheticKind::linear_lift, p);
}

inline BladeElement element_at(const TurbineConfig& t, const PolarTable& polar, double lambda,
                               const CorrectionSpec& corr) {
  auto d = simplified_optimum(lambda, polar, t);
  return BladeElement(ElementGeometry::place(t, lambda, d.gamma, d.chord), polar, corr);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bem::fixtures
