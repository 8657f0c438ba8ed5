#include "bem/polar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

#include "bem/error.hpp"
#include "bem/numeric.hpp"

namespace bem {

namespace {

constexpr double kDomainSlack = 1e-12;

double sign(double v) { return (v > 0.0) - (v < 0.0); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

// ---------------------------------------------------------------------------
// MonotoneCubic

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw Error(ErrorKind::validation,
                "interpolant needs at least two matching nodes");
  }
  linear_ = n < 4;
  slope_.assign(n, 0.0);

  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    delta[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  if (linear_) return;

  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      slope_[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slope_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }

  // One-sided three-point end slopes, limited to keep monotonicity.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(s) != sign(d0)) {
      s = 0.0;
    } else if (sign(d0) != sign(d1) && std::abs(s) > std::abs(3.0 * d0)) {
      s = 3.0 * d0;
    }
    return s;
  };
  slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::segment(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0;
  const auto k = static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(k, x_.size() - 2);
}

double MonotoneCubic::value(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  if (linear_) return y_[k] + t * (y_[k + 1] - y_[k]);
  if (t == 0.0) return y_[k];
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] +
         h11 * h * slope_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  if (linear_) return (y_[k + 1] - y_[k]) / h;
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  const double d00 = 6.0 * t2 - 6.0 * t;
  const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = -6.0 * t2 + 6.0 * t;
  const double d11 = 3.0 * t2 - 2.0 * t;
  return (d00 * y_[k] + d01 * y_[k + 1]) / h + d10 * slope_[k] +
         d11 * slope_[k + 1];
}

// ---------------------------------------------------------------------------
// PolarTable

PolarTable PolarTable::from_samples(std::vector<PolarSample> samples,
                                    const PolarOptions& options) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::validation, "polar needs at least two samples");
  }
  std::sort(samples.begin(), samples.end(),
            [](const PolarSample& l, const PolarSample& r) {
              return l.alpha < r.alpha;
            });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.alpha) || !std::isfinite(s.cl) ||
        !std::isfinite(s.cd)) {
      throw Error(ErrorKind::validation, "polar sample is not finite");
    }
    if (s.cd < 0.0) {
      std::ostringstream msg;
      msg << "negative drag coefficient cd=" << s.cd << " at alpha="
          << s.alpha;
      throw Error(ErrorKind::validation, msg.str());
    }
    if (i > 0 && samples[i - 1].alpha == s.alpha) {
      std::ostringstream msg;
      msg << "duplicate angle of attack alpha=" << s.alpha;
      throw Error(ErrorKind::validation, msg.str());
    }
  }

  PolarTable table;
  if (options.alpha_s) {
    table.alpha_s_ = *options.alpha_s;
  } else {
    const auto best = std::max_element(
        samples.begin(), samples.end(),
        [](const PolarSample& l, const PolarSample& r) { return l.cl < r.cl; });
    table.alpha_s_ = best->alpha;
  }
  table.beta_ = options.beta.value_or(table.alpha_s_);

  if (!(table.beta_ > 0.0 && table.beta_ <= table.alpha_s_ &&
        table.alpha_s_ < numeric::pi / 2.0)) {
    std::ostringstream msg;
    msg << "polar window must satisfy 0 < beta <= alpha_s < pi/2 (beta="
        << table.beta_ << ", alpha_s=" << table.alpha_s_ << ")";
    throw Error(ErrorKind::validation, msg.str());
  }
  for (const auto& s : samples) {
    if (s.alpha > 0.0 && s.alpha <= table.beta_ && s.cl <= 0.0) {
      std::ostringstream msg;
      msg << "lift must be positive on (0, beta]; cl=" << s.cl
          << " at alpha=" << s.alpha;
      throw Error(ErrorKind::validation, msg.str());
    }
  }

  std::vector<double> a, cl, cd;
  a.reserve(samples.size());
  cl.reserve(samples.size());
  cd.reserve(samples.size());
  for (const auto& s : samples) {
    a.push_back(s.alpha);
    cl.push_back(s.cl);
    cd.push_back(s.cd);
  }
  table.cl_ = MonotoneCubic(a, std::move(cl));
  table.cd_ = MonotoneCubic(std::move(a), std::move(cd));
  table.samples_ = std::move(samples);
  table.label_ = options.label;
  table.clamp_cl_ = options.clamp_cl;
  return table;
}

bool PolarTable::in_lift_domain(double alpha) const noexcept {
  return clamp_cl_ || (alpha >= alpha_min() - kDomainSlack &&
                       alpha <= alpha_max() + kDomainSlack);
}

double PolarTable::cl(double alpha) const {
  if (!in_lift_domain(alpha)) {
    std::ostringstream msg;
    msg << "angle of attack " << alpha << " outside lift data range ["
        << alpha_min() << ", " << alpha_max() << "]";
    throw Error(ErrorKind::domain, msg.str());
  }
  return cl_.value(alpha);
}

double PolarTable::cl_prime(double alpha) const {
  if (!in_lift_domain(alpha)) {
    std::ostringstream msg;
    msg << "angle of attack " << alpha << " outside lift data range";
    throw Error(ErrorKind::domain, msg.str());
  }
  return cl_.derivative(alpha);
}

double PolarTable::cd(double alpha) const {
  return std::max(0.0, cd_.value(alpha));
}

double PolarTable::cd_prime(double alpha) const { return cd_.derivative(alpha); }

// ---------------------------------------------------------------------------
// Loading

PolarTable load_polar(std::istream& in, PolarFormat format,
                      const PolarOptions& options) {
  if (format != PolarFormat::csv) {
    throw Error(ErrorKind::parse, "unsupported polar format");
  }
  std::vector<PolarSample> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      fields.push_back(view.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }

    PolarSample s;
    const bool numeric = fields.size() == 3 && parse_double(fields[0], s.alpha) &&
                         parse_double(fields[1], s.cl) &&
                         parse_double(fields[2], s.cd);
    if (!numeric) {
      double dummy = 0.0;
      if (header_allowed && !fields.empty() && !parse_double(fields[0], dummy)) {
        header_allowed = false;
        continue;
      }
      std::ostringstream msg;
      msg << "polar line " << line_no
          << ": expected three numeric fields alpha_rad,cl,cd";
      throw Error(ErrorKind::parse, msg.str());
    }
    header_allowed = false;
    rows.push_back(s);
  }
  if (rows.size() < 4) {
    std::ostringstream msg;
    msg << "polar needs at least 4 data rows, got " << rows.size();
    throw Error(ErrorKind::parse, msg.str());
  }
  return PolarTable::from_samples(std::move(rows), options);
}

PolarTable load_polar_file(const std::filesystem::path& path,
                           const PolarOptions& options) {
  PolarOptions opts = options;
  if (path == "-") {
    if (opts.label.empty()) opts.label = "stdin";
    return load_polar(std::cin, PolarFormat::csv, opts);
  }
  std::ifstream file(path);
  if (!file) {
    throw Error(ErrorKind::parse, "cannot open polar file " + path.string());
  }
  if (opts.label.empty()) opts.label = path.stem().string();
  return load_polar(file, PolarFormat::csv, opts);
}

// ---------------------------------------------------------------------------
// Design helpers

double best_glide_angle(const PolarTable& polar) {
  const double beta = polar.beta();
  const double hi = std::min(beta, polar.alpha_max());
  constexpr std::size_t kGrid = 4000;

  auto ratio = [&](double a) {
    const double cl = polar.cl(a);
    return cl > 0.0 ? polar.cd(a) / cl : std::numeric_limits<double>::infinity();
  };

  std::size_t best = kGrid;
  double best_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> grid(kGrid);
  for (std::size_t i = 0; i < kGrid; ++i) {
    grid[i] = hi * static_cast<double>(i + 1) / static_cast<double>(kGrid);
    const double r = ratio(grid[i]);
    if (r < best_ratio) {
      best_ratio = r;
      best = i;
    }
  }
  if (best == kGrid) {
    throw Error(ErrorKind::no_positive_lift,
                "cl is not positive anywhere on (0, beta]");
  }
  const double lo = best == 0 ? grid[0] * 1e-6 : grid[best - 1];
  const double up = best + 1 == kGrid ? grid[best] : grid[best + 1];
  const double refined = numeric::golden_section_minimize(ratio, lo, up, 1e-13);
  return ratio(refined) <= best_ratio ? refined : grid[best];
}

PolarTable synthetic_polar(SyntheticKind kind, const SyntheticParams& p) {
  if (!(p.step > 0.0) || !(p.alpha_max > p.alpha_min)) {
    throw Error(ErrorKind::validation, "synthetic polar: bad sampling range");
  }
  if (p.cd0 < 0.0 || p.cd2 < 0.0) {
    throw Error(ErrorKind::validation, "synthetic polar: negative drag");
  }

  std::vector<double> alphas;
  const auto n = static_cast<std::size_t>(
      std::floor((p.alpha_max - p.alpha_min) / p.step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    alphas.push_back(p.alpha_min + p.step * static_cast<double>(i));
  }
  if (p.alpha_max - alphas.back() > 1e-12) alphas.push_back(p.alpha_max);
  alphas.back() = std::max(alphas.back(), p.alpha_max);

  auto force_node = [&](double a) {
    if (a <= p.alpha_min || a >= p.alpha_max) return;
    std::erase_if(alphas, [&](double x) { return std::abs(x - a) < 0.25 * p.step; });
    alphas.push_back(a);
    std::sort(alphas.begin(), alphas.end());
  };
  force_node(0.0);

  PolarOptions options;
  options.label = p.label;
  options.beta = p.beta;

  std::function<double(double)> cl_fn;
  std::function<double(double)> cd_fn = [&](double a) {
    return p.cd0 + p.cd2 * a * a;
  };

  switch (kind) {
    case SyntheticKind::linear_lift:
      cl_fn = [&](double a) { return p.cl0 + p.slope * a; };
      options.alpha_s = p.alpha_s;
      break;
    case SyntheticKind::constant:
      cl_fn = [&](double) { return p.cl_const; };
      options.alpha_s = p.alpha_s.value_or(std::min(p.alpha_max, 1.5));
      break;
    case SyntheticKind::linear_lift_with_stall: {
      if (!p.alpha_s || !(p.stall_width > 0.0) || p.stall_retained < 0.0 ||
          p.stall_retained > 1.0) {
        throw Error(ErrorKind::validation,
                    "stall polar needs alpha_s, stall_width > 0 and "
                    "stall_retained in [0, 1]");
      }
      const double as = *p.alpha_s;
      const double peak = p.cl0 + p.slope * as;
      const double floor_cl = p.stall_retained * peak;
      force_node(as);
      force_node(as + p.stall_width);
      cl_fn = [=](double a) {
        if (a <= as) return p.cl0 + p.slope * a;
        if (a >= as + p.stall_width) return floor_cl;
        return peak + (floor_cl - peak) * (a - as) / p.stall_width;
      };
      cd_fn = [=](double a) {
        double cd = p.cd0 + p.cd2 * a * a;
        if (a > as) cd += p.cd_stall_slope * (a - as);
        return cd;
      };
      options.alpha_s = as;
      break;
    }
  }

  std::vector<PolarSample> samples;
  samples.reserve(alphas.size());
  for (double a : alphas) samples.push_back({a, cl_fn(a), cd_fn(a)});
  return PolarTable::from_samples(std::move(samples), options);
}

}  // namespace bem
