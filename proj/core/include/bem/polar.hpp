#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bem {

struct PolarSample {
  double alpha = 0.0;  // angle of attack [rad]
  double cl = 0.0;
  double cd = 0.0;
};

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// derivative limiting). C1, no overshoot between samples, exact at the
/// nodes. Falls back to piecewise linear below four nodes.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  /// Arguments outside [x.front(), x.back()] are clamped to the end value.
  double value(double x) const;
  double derivative(double x) const;

  bool empty() const noexcept { return x_.empty(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
  bool linear_ = false;
};

struct PolarOptions {
  std::optional<double> beta;     // half-width of the validity window
  std::optional<double> alpha_s;  // stall angle; argmax of sampled cl if unset
  std::string label;
  bool clamp_cl = false;          // extrapolate cl by constants instead of failing
};

/// Tabulated lift/drag coefficients with the validity window [-beta, beta]
/// and stall angle. Immutable once built.
class PolarTable {
 public:
  /// Sorts the samples and validates them: cd >= 0, no duplicate angle,
  /// 0 < beta <= alpha_s < pi/2, cl > 0 on the sampled part of (0, beta].
  static PolarTable from_samples(std::vector<PolarSample> samples,
                                 const PolarOptions& options = {});

  const std::vector<PolarSample>& samples() const noexcept { return samples_; }
  double beta() const noexcept { return beta_; }
  double alpha_s() const noexcept { return alpha_s_; }
  const std::string& label() const noexcept { return label_; }
  bool clamps_cl() const noexcept { return clamp_cl_; }
  double alpha_min() const noexcept { return samples_.front().alpha; }
  double alpha_max() const noexcept { return samples_.back().alpha; }

  /// Lift coefficient. Throws ErrorKind::domain outside the sampled range
  /// unless the table was built with clamp_cl.
  double cl(double alpha) const;
  double cl_prime(double alpha) const;

  /// Drag coefficient, defined everywhere by constant extrapolation.
  double cd(double alpha) const;
  double cd_prime(double alpha) const;

  bool in_lift_domain(double alpha) const noexcept;

 private:
  PolarTable() = default;

  std::vector<PolarSample> samples_;
  MonotoneCubic cl_;
  MonotoneCubic cd_;
  double beta_ = 0.0;
  double alpha_s_ = 0.0;
  std::string label_;
  bool clamp_cl_ = false;
};

enum class PolarFormat { csv };

/// Reads `alpha_rad,cl,cd` rows. '#' starts a comment, a single header line
/// is allowed before the first data row. At least four rows are required.
PolarTable load_polar(std::istream& in, PolarFormat format = PolarFormat::csv,
                      const PolarOptions& options = {});

/// File variant; the path "-" reads standard input.
PolarTable load_polar_file(const std::filesystem::path& path,
                           const PolarOptions& options = {});

/// Angle in (0, beta] minimising cd/cl: grid scan refined by golden-section
/// search around the best grid cell.
double best_glide_angle(const PolarTable& polar);

enum class SyntheticKind { linear_lift, linear_lift_with_stall, constant };

struct SyntheticParams {
  double slope = 6.283185307179586;  // dcl/dalpha
  double cl0 = 0.0;                  // cl at alpha = 0 (linear kinds)
  double cl_const = 1.0;             // constant kind
  double cd0 = 0.01;
  double cd2 = 0.0;                  // cd = cd0 + cd2 alpha^2
  double alpha_min = -0.5;
  double alpha_max = 0.5;
  double step = 0.005;               // sampling step
  std::optional<double> beta;
  std::optional<double> alpha_s;     // stall angle (stall kind: required)
  double stall_retained = 0.5;       // cl after the drop, as a fraction
  double stall_width = 0.05;         // angle over which the drop happens
  double cd_stall_slope = 0.0;       // extra dcd/dalpha beyond stall
  std::string label;
};

/// Analytically defined polar sampled at `step` (stall corners are always
/// sampled exactly). Used for tests and demos.
PolarTable synthetic_polar(SyntheticKind kind, const SyntheticParams& params);

}  // namespace bem
