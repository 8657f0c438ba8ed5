#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "bem/error.hpp"

namespace bem::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(ErrorKind::parse, "key '" + std::string(key) + "': '" + std::string(value) +
                                    "' is not " + std::string(want));
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) bad_value(key, v, "a finite number");
  return out;
}

std::size_t to_count(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, v, "a non-negative integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(to_double(key, trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (out.empty()) bad_value(key, v, "a comma-separated list of numbers");
  return out;
}

SyntheticKind to_synthetic(std::string_view key, std::string_view v) {
  if (v == "linear_lift") return SyntheticKind::linear_lift;
  if (v == "linear_lift_with_stall") return SyntheticKind::linear_lift_with_stall;
  if (v == "constant") return SyntheticKind::constant;
  bad_value(key, v, "one of linear_lift, linear_lift_with_stall, constant");
}

DesignMode to_mode(std::string_view key, std::string_view v) {
  if (v == "simplified") return DesignMode::simplified;
  if (v == "corrected") return DesignMode::corrected;
  if (v == "fixed") return DesignMode::fixed;
  bad_value(key, v, "one of simplified, corrected, fixed");
}

struct Pending {
  CorrectionVariant variant = CorrectionVariant::none;
  std::optional<double> a_c;
  bool tip_loss = false;
  bool drag = true;
  bool strict = true;
  std::optional<std::vector<double>> lambda_list;
  std::optional<std::size_t> lambda_count;
  std::set<std::string> synthetic_keys;
};

using Setter = std::function<void(RunConfig&, Pending&, std::string_view key, std::string_view)>;

#define NUM(field) [](RunConfig& c, Pending&, std::string_view k, std::string_view v) { c.field = to_double(k, v); }
#define COUNT(field) [](RunConfig& c, Pending&, std::string_view k, std::string_view v) { c.field = to_count(k, v); }
#define SYN(field) [](RunConfig& c, Pending& p, std::string_view k, std::string_view v) { \
    c.synthetic_params.field = to_double(k, v); p.synthetic_keys.insert(std::string(k)); }

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"turbine.B", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         const double b = to_double(k, v);
         if (b != std::floor(b) || b < 1.0 || b > 1e6) bad_value(k, v, "a positive integer");
         c.turbine.blade_count = static_cast<int>(b);
       }},
      {"turbine.R", NUM(turbine.radius)},
      {"turbine.rho", NUM(turbine.fluid_density)},
      {"turbine.U", NUM(turbine.upstream_speed)},
      {"turbine.omega", NUM(turbine.rotation_speed)},
      {"turbine.lambda_min", NUM(turbine.lambda_min)},
      {"turbine.lambda_max", NUM(turbine.lambda_max)},

      {"polar.path", [](RunConfig& c, Pending&, std::string_view, std::string_view v) {
         c.polar_path = std::filesystem::path(std::string(v));
       }},
      {"polar.synthetic", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.synthetic = to_synthetic(k, v);
       }},
      {"polar.beta", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.polar_options.beta = c.synthetic_params.beta = to_double(k, v);
       }},
      {"polar.alpha_s", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.polar_options.alpha_s = c.synthetic_params.alpha_s = to_double(k, v);
       }},
      {"polar.clamp_cl", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.polar_options.clamp_cl = to_bool(k, v);
       }},
      {"polar.label", [](RunConfig& c, Pending&, std::string_view, std::string_view v) {
         c.polar_options.label = c.synthetic_params.label = std::string(v);
       }},
      {"polar.slope", SYN(slope)},
      {"polar.cl0", SYN(cl0)},
      {"polar.cl_const", SYN(cl_const)},
      {"polar.cd0", SYN(cd0)},
      {"polar.cd2", SYN(cd2)},
      {"polar.alpha_min", SYN(alpha_min)},
      {"polar.alpha_max", SYN(alpha_max)},
      {"polar.step", SYN(step)},
      {"polar.stall_retained", SYN(stall_retained)},
      {"polar.stall_width", SYN(stall_width)},
      {"polar.cd_stall_slope", SYN(cd_stall_slope)},

      {"correction.variant", [](RunConfig&, Pending& p, std::string_view k, std::string_view v) {
         try {
           p.variant = parse_correction_variant(v);
         } catch (const Error&) {
           bad_value(k, v, "one of none, glauert3, glauert_empirical, buhl, wilson_spera");
         }
       }},
      {"correction.a_c", [](RunConfig&, Pending& p, std::string_view k, std::string_view v) {
         p.a_c = to_double(k, v);
       }},
      {"correction.tip_loss", [](RunConfig&, Pending& p, std::string_view k, std::string_view v) {
         p.tip_loss = to_bool(k, v);
       }},
      {"correction.drag", [](RunConfig&, Pending& p, std::string_view k, std::string_view v) {
         p.drag = to_bool(k, v);
       }},
      {"correction.strict", [](RunConfig&, Pending& p, std::string_view k, std::string_view v) {
         p.strict = to_bool(k, v);
       }},

      {"solver.method", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         if (v != "usual" && v != "fixed" && v != "newton" && v != "bisect" && v != "all") {
           bad_value(k, v, "one of usual, fixed, newton, bisect, all");
         }
         c.method = std::string(v);
       }},
      {"solver.tol", NUM(solver.tol)},
      {"solver.max_iter", COUNT(solver.max_iter)},
      {"solver.epsilon", NUM(solver.epsilon)},
      {"solver.phi0", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.solver.phi0 = to_double(k, v);
       }},
      {"solver.bracket", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         const auto ends = to_list(k, v);
         if (ends.size() != 2) bad_value(k, v, "two numbers 'lo, hi'");
         c.solver.bracket = AngleInterval{ends[0], ends[1]};
       }},
      {"solver.phi_tol", NUM(solver.phi_tol)},
      {"solver.grid_points", COUNT(solver.grid_points)},
      {"solver.scan_grid", COUNT(scan_grid)},

      {"lambda", [](RunConfig&, Pending& p, std::string_view k, std::string_view v) {
         p.lambda_list = std::vector<double>{to_double(k, v)};
       }},
      {"lambda_grid", [](RunConfig&, Pending& p, std::string_view k, std::string_view v) {
         p.lambda_list = to_list(k, v);
       }},
      {"lambda_count", [](RunConfig&, Pending& p, std::string_view k, std::string_view v) {
         p.lambda_count = to_count(k, v);
       }},

      {"design.mode", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.design_mode = to_mode(k, v);
       }},
      {"design.gamma", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.gamma = to_double(k, v);
       }},
      {"design.chord", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.chord = to_double(k, v);
       }},
      {"design.kappa", NUM(optimize.kappa)},
      {"design.tol", NUM(optimize.tol)},
      {"design.max_steps", COUNT(optimize.max_steps)},
      {"design.adjoint", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         if (v == "consistent") {
           c.optimize.form = AdjointForm::consistent;
         } else if (v == "expanded") {
           c.optimize.form = AdjointForm::expanded;
         } else {
           bad_value(k, v, "one of consistent, expanded");
         }
       }},

      {"sweep.grid", COUNT(sweep_grid)},
      {"sweep.refine", [](RunConfig& c, Pending&, std::string_view k, std::string_view v) {
         c.sweep_refine = to_bool(k, v);
       }},

      {"output", [](RunConfig& c, Pending&, std::string_view, std::string_view v) {
         c.output = std::filesystem::path(std::string(v));
       }},
  };
  return table;
}

#undef NUM
#undef COUNT
#undef SYN

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::validation, msg); }

void finish(RunConfig& c, Pending& p, const std::filesystem::path& base_dir) {
  c.turbine.validate();

  c.correction = CorrectionSpec::make(p.variant, p.tip_loss, p.a_c);
  c.correction.drag = p.drag;
  c.correction.unit_tip_in_correction = p.strict;

  try {
    c.solver.validate();
  } catch (const Error& e) {
    invalid(e.what());
  }
  if (c.scan_grid < 2) invalid("solver.scan_grid must be at least 2");

  if (c.polar_path && c.synthetic) invalid("polar.path and polar.synthetic are mutually exclusive");
  if (!c.polar_path && !c.synthetic) invalid("one of polar.path or polar.synthetic is required");
  if (c.polar_path) {
    if (!p.synthetic_keys.empty()) {
      invalid("key '" + *p.synthetic_keys.begin() + "' only applies to synthetic polars");
    }
    const bool from_stdin = *c.polar_path == "-";
    if (!from_stdin && c.polar_path->is_relative() && !base_dir.empty()) {
      c.polar_path = base_dir / *c.polar_path;
    }
    if (!from_stdin && !std::filesystem::is_regular_file(*c.polar_path)) {
      invalid("polar file '" + c.polar_path->string() + "' does not exist");
    }
  }

  if (p.lambda_list && p.lambda_count) invalid("give either lambda/lambda_grid or lambda_count");
  if (p.lambda_list) {
    c.lambdas = *p.lambda_list;
  } else if (p.lambda_count) {
    const std::size_t n = *p.lambda_count;
    if (n == 0) invalid("lambda_count must be positive");
    const double lo = c.turbine.lambda_min, hi = c.turbine.lambda_max;
    for (std::size_t i = 0; i < n; ++i) {
      c.lambdas.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1));
    }
  }
  std::sort(c.lambdas.begin(), c.lambdas.end());
  if (std::adjacent_find(c.lambdas.begin(), c.lambdas.end()) != c.lambdas.end()) {
    invalid("lambda grid contains a repeated value");
  }
  for (const double l : c.lambdas) {
    if (!(l > 0.0) || c.turbine.radius_at(l) > c.turbine.radius * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "lambda=" << l << " does not place an element inside the rotor";
      invalid(msg.str());
    }
  }

  if (c.gamma.has_value() != c.chord.has_value()) {
    invalid("design.gamma and design.chord must be given together");
  }
  if (c.chord && !(*c.chord > 0.0)) invalid("design.chord must be positive");
  if (c.gamma && !(std::abs(*c.gamma) < std::acos(0.0))) invalid("|design.gamma| must be below pi/2");
  if (c.design_mode == DesignMode::fixed && !c.gamma) {
    invalid("design.mode = fixed needs design.gamma and design.chord");
  }
  if (!(c.optimize.kappa > 0.0) || !(c.optimize.tol > 0.0)) {
    invalid("design.kappa and design.tol must be positive");
  }
  if (c.sweep_grid < 2) invalid("sweep.grid must be at least 2");
  if (c.output && c.output->is_relative() && !base_dir.empty()) c.output = base_dir / *c.output;
}

}  // namespace

std::string_view to_string(DesignMode m) noexcept {
  switch (m) {
    case DesignMode::simplified: return "simplified";
    case DesignMode::corrected: return "corrected";
    case DesignMode::fixed: return "fixed";
  }
  return "unknown";
}

PolarTable RunConfig::load_polar() const {
  if (synthetic) return synthetic_polar(*synthetic, synthetic_params);
  return load_polar_file(*polar_path, polar_options);
}

BladeElement RunConfig::element(double lambda, const PolarTable& polar) const {
  if (gamma) {
    return BladeElement(ElementGeometry::place(turbine, lambda, *gamma, *chord), polar, correction);
  }
  const DesignPoint d = simplified_optimum(lambda, polar, turbine);
  return BladeElement(ElementGeometry::place(turbine, lambda, d.gamma, d.chord), polar, correction);
}

void RunConfig::require_lambdas() const {
  if (lambdas.empty()) invalid("no speed ratio given: set lambda, lambda_grid or lambda_count");
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  Pending pending;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    const auto where = " (line " + std::to_string(lineno) + ")";
    if (eq == std::string_view::npos) throw Error(ErrorKind::parse, "expected key = value" + where);
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorKind::parse, "unknown key '" + std::string(key) + "'" + where);
    }
    if (!seen.insert(std::string(key)).second) {
      throw Error(ErrorKind::parse, "key '" + std::string(key) + "' given twice" + where);
    }
    if (value.empty()) throw Error(ErrorKind::parse, "key '" + std::string(key) + "' has no value" + where);
    try {
      it->second(cfg, pending, key, value);
    } catch (const Error& e) {
      throw Error(e.kind(), e.what() + where);
    }
  }
  finish(cfg, pending, base_dir);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::validation, "cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

}  // namespace bem::cli
