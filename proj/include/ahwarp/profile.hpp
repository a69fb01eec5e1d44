#pragma once

#include <vector>

#include "ahwarp/ode.hpp"

namespace ahwarp {

/// Radius r of the spherical cap and width eps of the curvature transition.
struct ProfileParams {
  double r = 0.0;
  double eps = 0.0;

  /// Throws ParameterError unless r > 0, eps >= 0 and r + eps < pi/2.
  void validate() const;
  /// Whether (r, eps) lies on the default grid [pi/4 - 0.15, pi/4 + 0.15] x [0, 0.15].
  bool in_default_domain() const;
};

/// Smooth step: 0 for x <= 0, 1 for x >= 1, with mollifier(x) + mollifier(1 - x) = 1.
double mollifier(double x);

/// Radial sectional curvature of the profile. At eps = 0 the value at rho = r is 1.
double k_parallel(const ProfileParams& p, double rho);

/// The warp A solving A'' + K_par A = 0, A(0) = 0, A'(0) = 1.
///
/// Equal to sin on [0, r] and to a_plus e^rho + a_minus e^-rho on [r + eps, inf). On the
/// transition [r, r + eps] it is integrated numerically and evaluated by re-stepping
/// from the stored nodes.
class WarpFunction {
 public:
  WarpFunction() = default;

  const ProfileParams& params() const { return params_; }
  double a_plus() const { return a_plus_; }
  double a_minus() const { return a_minus_; }
  double tol() const { return tol_; }

  double value(double rho) const;
  double deriv(double rho) const;
  double second(double rho) const { return -k_parallel(params_, rho) * value(rho); }
  /// A'(rho) / A(rho); rho > 0.
  double log_deriv(double rho) const;

  /// Exterior branch only, usable for any rho (no domain check).
  double exterior_value(double rho) const;
  double exterior_deriv(double rho) const;

  /// |A| and |A'| mismatch at rho = r + eps between the transition integration and
  /// the exterior closed form. Zero for eps = 0.
  std::pair<double, double> matching_defect() const;

  /// Nodes of the transition integration (empty for eps = 0).
  const ode::Solution<2>& transition() const { return transition_; }

  friend WarpFunction solve_warp(const ProfileParams& p, double tol);

 private:
  ProfileParams params_{};
  double a_plus_ = 0.0;
  double a_minus_ = 0.0;
  double tol_ = 0.0;
  ode::Field<2> field_;
  ode::Solution<2> transition_;
};

WarpFunction solve_warp(const ProfileParams& p, double tol = 1e-12);

/// Sectional curvature of planes orthogonal to the radial direction; rho > 0.
double k_perp(const WarpFunction& w, double rho);

/// cos^2(alpha) K_par(rho) + sin^2(alpha) K_perp(rho).
double sec_interpolated(const WarpFunction& w, double rho, double cos_alpha);

/// A certified lower bound a > 0 for A'/A on (0, inf).
double nontrapping_rate(const WarpFunction& w);

/// Smallest rho0 with K_par < 0 and K_perp < 0 on (rho0, inf).
double negative_curvature_radius(const WarpFunction& w);

/// Largest negative_curvature_radius over a set of warps.
double negative_curvature_radius(const std::vector<WarpFunction>& warps);

}  // namespace ahwarp
