#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "bem/polar.hpp"

namespace bem {

/// Rotor-level data. Only the diagnostics and element placement use the
/// dimensional quantities; everything else works on tip-speed ratios.
struct TurbineConfig {
  int blade_count = 3;
  double radius = 1.0;            // R [m]
  double fluid_density = 1.225;   // [kg/m^3]
  double upstream_speed = 10.0;   // [m/s]
  double rotation_speed = 10.0;   // [rad/s]
  double lambda_min = 0.1;
  double lambda_max = 1.0;

  void validate() const;
  /// Radius at which the local speed ratio equals `lambda`.
  double radius_at(double lambda) const { return lambda * upstream_speed / rotation_speed; }
  /// Speed ratio at the tip, Omega R / U.
  double tip_speed_ratio() const { return rotation_speed * radius / upstream_speed; }
};

struct ElementGeometry {
  double lambda = 1.0;
  double r = 0.5;        // [m]
  double gamma = 0.0;    // twist [rad]
  double chord = 0.1;    // [m]
  int blade_count = 3;
  double tip_radius = 1.0;  // R [m]

  /// Element at speed ratio `lambda` of the given rotor, r = lambda U / Omega.
  static ElementGeometry place(const TurbineConfig& turbine, double lambda,
                               double gamma, double chord);

  double solidity() const;   // B c / (2 pi r)
  double theta() const;      // atan(1/lambda)
  double r_over_R() const { return r / tip_radius; }

  void validate() const;
};

enum class CorrectionVariant { none, glauert3, glauert_empirical, buhl, wilson_spera };

std::string_view to_string(CorrectionVariant v) noexcept;
CorrectionVariant parse_correction_variant(std::string_view name);
double default_threshold(CorrectionVariant v) noexcept;

struct CorrectionSpec {
  CorrectionVariant variant = CorrectionVariant::none;
  double a_c = 1.0;
  bool tip_loss = false;
  bool drag = true;                // false: drag coefficient treated as zero
  bool unit_tip_in_correction = true;   // glauert_empirical: F = 1 inside psi

  /// Variant with its usual threshold unless `a_c` is given.
  static CorrectionSpec make(CorrectionVariant variant, bool tip_loss,
                             std::optional<double> a_c = std::nullopt);
  /// No high-induction correction, no tip loss, no drag.
  static CorrectionSpec simplified();

  bool is_simplified() const noexcept {
    return variant == CorrectionVariant::none && !tip_loss && !drag;
  }
  /// Effective threshold: 1 when the correction is off.
  double threshold() const noexcept {
    return variant == CorrectionVariant::none ? 1.0 : a_c;
  }
  void validate() const;
};

/// psi at excess x = (a - a_c)_+ together with its partial derivatives.
struct PsiValue {
  double value = 0.0;
  double dx = 0.0;
  double dF = 0.0;
};

/// Thrust correction term for excess `x >= 0`; `tip` is the tip factor seen
/// by the variants that use it (the strict mode substitution is done by the
/// callers through CorrectionSpec).
PsiValue psi_excess(const CorrectionSpec& corr, double x, double tip);
/// psi((a - a_c)_+) with the strict-mode rule applied.
double psi(const CorrectionSpec& corr, double a, double tip = 1.0);

/// sin(phi) tan(theta - phi) and its derivative.
double mu_G(double theta, double phi);
double mu_G_prime(double theta, double phi);

/// Prandtl factor and its phi-derivative for B blades at relative radius
/// `r_over_R`.
double prandtl_tip_factor(int blades, double r_over_R, double phi);
double prandtl_tip_factor_prime(int blades, double r_over_R, double phi);

struct FlowState {
  double phi = 0.0;
  double alpha = 0.0;
  double a = 0.0;
  double a_prime = 0.0;
  double tip_factor = 1.0;
  double residual = 0.0;
  int lift_sign = 0;          // sign of C_L at the operating angle of attack
  bool near_singular = false; // phi close to 0 or pi/2, induction unreliable
};

struct ResidualParts {
  double lift = 0.0;     // mu_L^c
  double drag = 0.0;     // tan(theta - phi) mu_D^c
  double geometric = 0.0;  // mu_G^c
  double value = 0.0;    // lift - drag - geometric
};

struct Loads {
  double thrust_coefficient = 0.0;   // C_T
  double thrust_per_span = 0.0;      // dT/dr [N/m]
  double torque_per_span = 0.0;      // dQ/dr [N]
  double axial_velocity = 0.0;       // (1 - a) U at the rotor plane
  double wake_rotation = 0.0;        // 2 a' Omega
};

/// Closed interval of admissible phi.
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const noexcept { return !(lo < hi); }
};

/// One blade element with its polar and model options. Keeps a reference
/// to the polar, which must outlive the element.
class BladeElement {
 public:
  BladeElement(ElementGeometry geom, const PolarTable& polar, CorrectionSpec corr);

  const ElementGeometry& geometry() const noexcept { return geom_; }
  const PolarTable& polar() const noexcept { return *polar_; }
  const CorrectionSpec& correction() const noexcept { return corr_; }
  double theta() const noexcept { return theta_; }
  double solidity() const noexcept { return sigma_; }

  /// Copy with another twist and chord.
  BladeElement with_design(double gamma, double chord) const;
  BladeElement with_correction(const CorrectionSpec& corr) const;

  double mu_L(double phi) const;
  double mu_D(double phi) const;
  double mu_L_prime(double phi) const;
  double mu_D_prime(double phi) const;

  double tip_factor(double phi) const;
  double tip_factor_prime(double phi) const;
  /// Tip factor as seen inside psi: the actual factor for the variants that
  /// use it, 1 otherwise (and for glauert_empirical in strict mode).
  double psi_tip_factor(double phi) const;
  double psi_tip_factor_prime(double phi) const;

  double mu_L_c(double phi) const;
  double mu_D_c(double phi) const;
  double mu_L_c_prime(double phi) const;
  double mu_D_c_prime(double phi) const;

  double g(double phi) const;
  double g_prime(double phi) const;

  /// tau(phi) and 1 - tau(phi); the complement is computed without
  /// cancellation so it stays accurate as tau approaches 1.
  struct Tau {
    double a = 0.0;
    double one_minus_a = 1.0;
  };
  Tau tau(double phi) const;
  double tau_prime(double phi) const;

  double mu_G_c(double phi) const;
  ResidualParts residual_parts(double phi) const;
  double residual(double phi) const { return residual_parts(phi).value; }
  double residual_prime(double phi) const;

  /// Axial induction from the momentum/blade balance at fixed phi (the
  /// second model equation); empty when it has no solution.
  std::optional<double> axial_from_balance(double phi) const;
  /// Angular induction from the third model equation.
  double angular_from_balance(double phi, double a) const;

  FlowState recover_induction(double phi) const;

  /// Residuals of the three original model equations at (phi, a, a').
  struct Violation {
    double tangent = 0.0;   // tan phi - (1-a)/(lambda (1+a'))
    double axial = 0.0;
    double angular = 0.0;
    double max_abs() const;
  };
  Violation original_equations(double phi, double a, double a_prime) const;

  /// I: the window of phi for which the angle of attack lies in
  /// [-beta, beta], intersected with (theta - pi/2, theta + pi/2).
  AngleInterval interval_I() const;
  /// I+: I intersected with (0, theta]. The lower end is open.
  AngleInterval interval_I_plus() const;
  /// Where the residual can be evaluated: the sampled lift range shifted by
  /// the twist, intersected with (0, theta] (or with I's pole bounds when
  /// the model admits phi <= 0).
  AngleInterval evaluation_range() const;
  bool admits_nonpositive_phi() const noexcept;

 private:
  double guard(double phi) const;
  bool psi_uses_tip() const noexcept;

  ElementGeometry geom_;
  const PolarTable* polar_;
  CorrectionSpec corr_;
  double theta_ = 0.0;
  double sigma_ = 0.0;
};

/// Axial induction a solving a/(1-a) + scale psi((a-a_c)_+)/(1-a)^2 = rhs,
/// the lowest such root. Returns a and 1 - a; empty if rhs <= -1.
std::optional<BladeElement::Tau> solve_axial(const CorrectionSpec& corr, double rhs,
                                             double scale, double tip);

Loads loads_diagnostics(const TurbineConfig& turbine, const BladeElement& element,
                        const FlowState& state);

}  // namespace bem
