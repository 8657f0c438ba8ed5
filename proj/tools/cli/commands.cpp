#include "commands.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include <spdlog/spdlog.h>

#include "bem/error.hpp"
#include "output.hpp"

namespace bem::cli {
namespace {

std::optional<double> finite(double x) {
  if (std::isfinite(x)) return x;
  return std::nullopt;
}

void fill_state(OutputRow& row, const FlowState& s) {
  row.phi = finite(s.phi);
  row.alpha = finite(s.alpha);
  row.a = finite(s.a);
  row.a_prime = finite(s.a_prime);
  row.F = finite(s.tip_factor);
  row.residual = finite(s.residual);
}

void fill_design(OutputRow& row, const ElementGeometry& g) {
  row.gamma = g.gamma;
  row.chord = g.chord;
}

std::optional<double> try_J(const BladeElement& element, const FlowState& state) {
  try {
    return finite(J_lambda(element, state));
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string try_category(const BladeElement& element, const FlowState& state) {
  try {
    return std::string(to_string(classify_root(element, state)));
  } catch (const Error&) {
    return {};
  }
}

OutputRow failed_row(double lambda, std::string method, const Error& e) {
  spdlog::warn("lambda={}: {} failed: {}", format_number(lambda), method, e.what());
  OutputRow row;
  row.lambda = lambda;
  row.method = std::move(method);
  row.status = std::string(to_string(e.kind()));
  return row;
}

std::vector<Method> methods_for(const RunConfig& cfg, const RunOptions& opts) {
  const std::string name = opts.method.value_or(cfg.method);
  if (name == "all") return {Method::usual, Method::fixed_point, Method::newton, Method::bisection};
  try {
    return {parse_method(name)};
  } catch (const Error& e) {
    throw Error(ErrorKind::validation, e.what());
  }
}

void emit(std::ostream& table, const std::vector<std::vector<OutputRow>>& per_lambda) {
  std::vector<OutputRow> rows;
  for (const auto& group : per_lambda) rows.insert(rows.end(), group.begin(), group.end());
  write_rows(table, rows);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

// max_I_plus_is_theta only tells whether the sign criteria hold trivially,
// and the rate bound is optional for convergence.
bool verdict(const std::string& group, const CheckReport& report) {
  for (const CheckItem& item : report.items) {
    if (!item.applicable || item.passed) continue;
    if (group == "existence" && item.name == "max_I_plus_is_theta") continue;
    if (item.name == "rate_condition") continue;
    return false;
  }
  return true;
}

}  // namespace

int exit_code_for(const Error& e) noexcept {
  switch (e.kind()) {
    case ErrorKind::parse:
    case ErrorKind::validation:
    case ErrorKind::configuration:
      return kExitConfig;
    default:
      return kExitFailure;
  }
}

int cmd_solve(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
              std::ostream& summary) {
  cfg.require_lambdas();
  const auto methods = methods_for(cfg, opts);
  const PolarTable polar = cfg.load_polar();
  std::vector<std::vector<OutputRow>> out(cfg.lambdas.size());

  parallel_for(cfg.lambdas.size(), opts.jobs, [&](std::size_t i) {
    const double lambda = cfg.lambdas[i];
    std::optional<BladeElement> element;
    try {
      element.emplace(cfg.element(lambda, polar));
    } catch (const Error& e) {
      for (const Method m : methods) out[i].push_back(failed_row(lambda, std::string(to_string(m)), e));
      return;
    }
    for (const Method m : methods) {
      try {
        const SolveReport rep = solve(m, *element, cfg.solver);
        OutputRow row;
        row.lambda = lambda;
        fill_design(row, element->geometry());
        fill_state(row, rep.state);
        row.phi = finite(rep.phi_star);
        row.iterations = static_cast<long long>(rep.iterations);
        row.method = std::string(to_string(m));
        row.status = std::string(to_string(rep.status));
        if (rep.converged) {
          row.J = try_J(*element, rep.state);
          row.root_category = try_category(*element, rep.state);
        } else {
          row.residual = rep.residual_history.empty()
                             ? std::nullopt
                             : finite(rep.residual_history.back());
          spdlog::warn("lambda={}: {} did not converge ({})", format_number(lambda), row.method,
                       rep.message.empty() ? row.status : rep.message);
        }
        out[i].push_back(std::move(row));
      } catch (const Error& e) {
        out[i].push_back(failed_row(lambda, std::string(to_string(m)), e));
      }
    }
  });

  emit(table, out);
  std::size_t total = 0, converged = 0;
  for (const auto& group : out) {
    for (const auto& row : group) {
      ++total;
      if (row.status == "converged") ++converged;
    }
  }
  summary << "converged=" << converged << '/' << total << '\n';
  return converged == total ? kExitOk : kExitFailure;
}

int cmd_scan(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
             std::ostream& summary) {
  cfg.require_lambdas();
  const PolarTable polar = cfg.load_polar();
  std::vector<std::vector<OutputRow>> out(cfg.lambdas.size());
  std::vector<char> failed(cfg.lambdas.size(), 0);

  parallel_for(cfg.lambdas.size(), opts.jobs, [&](std::size_t i) {
    const double lambda = cfg.lambdas[i];
    try {
      const BladeElement element = cfg.element(lambda, polar);
      const RootSet set = scan_roots(element, cfg.scan_grid, cfg.solver.tol);
      if (set.roots.empty()) spdlog::info("lambda={}: no root found", format_number(lambda));
      for (const Root& root : set.roots) {
        OutputRow row;
        row.lambda = lambda;
        fill_design(row, element.geometry());
        fill_state(row, root.state);
        row.method = "scan";
        row.J = try_J(element, root.state);
        row.root_category = std::string(to_string(root.category));
        row.status = "root";
        out[i].push_back(std::move(row));
      }
    } catch (const Error& e) {
      failed[i] = 1;
      out[i].push_back(failed_row(lambda, "scan", e));
    }
  });

  emit(table, out);
  std::size_t roots = 0, failures = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (failed[i]) {
      ++failures;
    } else {
      roots += out[i].size();
    }
  }
  summary << "roots=" << roots << '\n';
  return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_design(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
               std::ostream& summary) {
  cfg.require_lambdas();
  if (cfg.design_mode == DesignMode::fixed) {
    throw Error(ErrorKind::validation, "design needs design.mode = simplified or corrected");
  }
  const bool corrected = cfg.design_mode == DesignMode::corrected;
  const PolarTable polar = cfg.load_polar();
  const std::size_t n = cfg.lambdas.size();
  std::vector<std::vector<OutputRow>> out(n);
  std::vector<double> J(n, 0.0), J_initial(n, 0.0);
  std::vector<char> ok(n, 0);

  parallel_for(n, opts.jobs, [&](std::size_t i) {
    const double lambda = cfg.lambdas[i];
    const std::string method(to_string(cfg.design_mode));
    try {
      const DesignPoint d = simplified_optimum(lambda, polar, cfg.turbine);
      OutputRow row;
      row.lambda = lambda;
      row.method = method;
      if (!corrected) {
        const BladeElement element(ElementGeometry::place(cfg.turbine, lambda, d.gamma, d.chord),
                                   polar, CorrectionSpec::simplified());
        const ClosedForms cf = simplified_closed_forms(element.theta(), d.phi_opt);
        row.gamma = d.gamma;
        row.chord = d.chord;
        row.phi = d.phi_opt;
        row.alpha = d.phi_opt - d.gamma;
        row.a = cf.a;
        row.a_prime = cf.a_prime;
        row.F = 1.0;
        row.residual = element.residual(d.phi_opt);
        row.iterations = 0;
        row.J = d.J;
        row.status = "converged";
        J[i] = J_initial[i] = d.J;
        ok[i] = 1;
      } else {
        const BladeElement start(ElementGeometry::place(cfg.turbine, lambda, d.gamma, d.chord),
                                 polar, cfg.correction);
        const OptimizeResult res = optimize_element(start, cfg.optimize);
        const BladeElement best = start.with_design(res.best.gamma, res.best.chord);
        const FlowState state = operating_point(best);
        fill_design(row, best.geometry());
        fill_state(row, state);
        row.iterations = static_cast<long long>(res.steps);
        row.J = res.best.J;
        row.root_category = try_category(best, state);
        row.status = res.converged ? "converged" : "not_converged";
        if (!res.converged) {
          spdlog::warn("lambda={}: optimizer stopped before convergence ({})",
                       format_number(lambda), res.message);
        }
        J[i] = res.best.J;
        J_initial[i] = res.initial.J;
        ok[i] = res.converged ? 1 : 0;
      }
      out[i].push_back(std::move(row));
    } catch (const Error& e) {
      out[i].push_back(failed_row(lambda, method, e));
    }
  });

  emit(table, out);
  std::size_t failures = 0;
  for (const char c : ok) failures += c ? 0 : 1;
  if (n >= 2) {
    const double lmax = cfg.turbine.lambda_max;
    if (corrected) summary << "Cp_initial=" << format_number(power_coefficient(cfg.lambdas, J_initial, lmax)) << '\n';
    summary << "Cp=" << format_number(power_coefficient(cfg.lambdas, J, lmax)) << '\n';
  }
  if (failures > 0) summary << "failures=" << failures << '\n';
  return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_sweep(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
              std::ostream& summary) {
  const PolarTable polar = cfg.load_polar();
  DesignLaw law;
  switch (cfg.design_mode) {
    case DesignMode::fixed:
      law = [&](double) { return std::array<double, 2>{*cfg.gamma, *cfg.chord}; };
      break;
    case DesignMode::simplified:
      law = [&](double lambda) {
        const DesignPoint d = simplified_optimum(lambda, polar, cfg.turbine);
        return std::array<double, 2>{d.gamma, d.chord};
      };
      break;
    case DesignMode::corrected:
      law = [&](double lambda) {
        const DesignPoint d = simplified_optimum(lambda, polar, cfg.turbine);
        const BladeElement start(ElementGeometry::place(cfg.turbine, lambda, d.gamma, d.chord),
                                 polar, cfg.correction);
        const OptimizeResult res = optimize_element(start, cfg.optimize);
        return std::array<double, 2>{res.best.gamma, res.best.chord};
      };
      break;
  }

  const SweepResult coarse = cp_sweep(cfg.turbine, polar, cfg.correction, law, cfg.sweep_grid, opts.jobs);
  std::optional<SweepResult> fine;
  if (cfg.sweep_refine) {
    fine = cp_sweep(cfg.turbine, polar, cfg.correction, law, 2 * (cfg.sweep_grid - 1) + 1, opts.jobs);
  }
  const SweepResult& shown = fine ? *fine : coarse;

  std::vector<OutputRow> rows;
  for (const SweepElement& el : shown.elements) {
    OutputRow row;
    row.lambda = el.lambda;
    row.gamma = el.design.gamma;
    row.chord = el.design.chord;
    row.method = "sweep";
    if (el.valid) {
      const BladeElement element(
          ElementGeometry::place(cfg.turbine, el.lambda, el.design.gamma, el.design.chord), polar,
          cfg.correction);
      fill_state(row, el.state);
      row.J = el.J;
      row.root_category = try_category(element, el.state);
      row.status = "ok";
    } else {
      spdlog::debug("lambda={}: element failed: {}", format_number(el.lambda), el.message);
      row.status = "failed";
    }
    rows.push_back(std::move(row));
  }
  write_rows(table, rows);

  summary << "Cp=" << format_number(coarse.Cp) << '\n';
  if (fine) {
    summary << "Cp_refined=" << format_number(fine->Cp) << '\n';
    summary << "Cp_difference=" << format_number(fine->Cp - coarse.Cp) << '\n';
  }
  if (shown.failures > 0) {
    spdlog::warn("{} of {} elements failed and contribute zero to Cp", shown.failures,
                 shown.elements.size());
    summary << "failures=" << shown.failures << '\n';
  }
  return kExitOk;
}

int cmd_check(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
              std::ostream& summary) {
  cfg.require_lambdas();
  const PolarTable polar = cfg.load_polar();
  const std::size_t n = cfg.lambdas.size();
  struct Group {
    std::string name;
    CheckReport report;
  };
  std::vector<std::vector<Group>> out(n);
  std::vector<std::string> errors(n);

  parallel_for(n, opts.jobs, [&](std::size_t i) {
    try {
      const BladeElement element = cfg.element(cfg.lambdas[i], polar);
      out[i].push_back({"existence", check_existence(element)});
      out[i].push_back({"contraction", check_contraction_conditions(element, cfg.solver.grid_points)});
      out[i].push_back({"fixed_point", check_fixed_point_hypotheses(element, cfg.solver.grid_points)});
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  table << "lambda,group,check,applicable,passed,margin,detail\n";
  int code = kExitOk;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string lambda = format_number(cfg.lambdas[i]);
    if (!errors[i].empty()) {
      spdlog::warn("lambda={}: {}", lambda, errors[i]);
      table << lambda << ",element,construction,true,false,," << csv_field(errors[i]) << '\n';
      summary << "lambda=" << lambda << " element=FAIL\n";
      code = kExitFailure;
      continue;
    }
    summary << "lambda=" << lambda;
    for (const Group& g : out[i]) {
      for (const CheckItem& item : g.report.items) {
        table << lambda << ',' << g.name << ',' << item.name << ','
              << (item.applicable ? "true" : "false") << ',' << (item.passed ? "true" : "false")
              << ',' << (std::isfinite(item.margin) ? format_number(item.margin) : std::string())
              << ',' << csv_field(item.detail) << '\n';
      }
      summary << ' ' << g.name << '=' << (verdict(g.name, g.report) ? "PASS" : "FAIL");
    }
    summary << '\n';
  }
  return code;
}

}  // namespace bem::cli
