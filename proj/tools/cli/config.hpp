#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bem/design.hpp"
#include "bem/model.hpp"
#include "bem/polar.hpp"
#include "bem/solvers.hpp"

namespace bem::cli {

enum class DesignMode { simplified, corrected, fixed };

std::string_view to_string(DesignMode m) noexcept;

struct RunConfig {
  TurbineConfig turbine;

  std::optional<std::filesystem::path> polar_path;
  std::optional<SyntheticKind> synthetic;
  SyntheticParams synthetic_params;
  PolarOptions polar_options;

  CorrectionSpec correction;
  SolveOptions solver;
  std::string method = "all";
  std::size_t scan_grid = 2000;

  std::vector<double> lambdas;  // ascending, may be empty

  DesignMode design_mode = DesignMode::simplified;
  std::optional<double> gamma;
  std::optional<double> chord;
  OptimizeOptions optimize;

  std::size_t sweep_grid = 51;
  bool sweep_refine = false;

  std::optional<std::filesystem::path> output;

  PolarTable load_polar() const;
  /// Twist and chord used at `lambda` by solve, scan and check: the fixed
  /// design when one is given, the simplified optimum otherwise.
  BladeElement element(double lambda, const PolarTable& polar) const;
  void require_lambdas() const;
};

/// Parses `key = value` lines. Relative file paths are resolved against
/// `base_dir`. Throws Error(parse) or Error(validation) on bad input.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace bem::cli
