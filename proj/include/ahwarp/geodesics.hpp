#pragma once

#include <memory>
#include <optional>

#include "ahwarp/ode.hpp"
#include "ahwarp/profile.hpp"
#include "ahwarp/trajectory.hpp"

namespace ahwarp {

/// Closest-approach distance s of the geodesic together with its profile (r, eps).
struct GeodesicParams {
  double s = 0.0;
  double r = 0.0;
  double eps = 0.0;

  ProfileParams profile() const { return {r, eps}; }
  void validate() const;
};

inline constexpr double kDefaultHorizon = 30.0;

/// Time at which the geodesic with closest approach s < r reaches rho = r.
double entry_time(double s, double r);
/// rho'(entry_time(s, r)).
double radial_exit_slope(double s, double r);

// Closed forms for (r, eps) = (pi/4, 0).

/// cosh(t - l) + sqrt(cos 2s) sinh(t - l) with l = entry_time(s, pi/4); 0 <= s < pi/4.
double closed_F(double t, double s);
/// log F(t, s), stable for large t.
double closed_log_F(double t, double s);
double closed_rho(double s, double t);
double closed_rho_prime(double s, double t);
double closed_theta(double s, double t);

/// Solution of rho'' = a (1 - rho'^2) with rho(0) = s, rho'(0) = v.
double comparison_lower_bound(double a, double s, double v, double t);

/// (rho, rho', A(rho), A'(rho)) along the geodesic.
struct RadialState {
  double rho = 0.0;
  double drho = 0.0;
  double warp = 0.0;
  double dwarp = 0.0;
};

/// Radial coordinate of the geodesic on [0, T].
///
/// For s > 0 the system (rho, rho', A(rho), A'(rho)) is integrated with the switching
/// surface rho = r; evaluations between nodes re-step from the preceding node, so
/// they carry the integrator's local accuracy. For s = 0 the solution is rho = t.
class RadialSolution {
 public:
  const GeodesicParams& params() const { return params_; }
  const WarpFunction& warp() const { return *warp_; }
  std::shared_ptr<const WarpFunction> warp_ptr() const { return warp_; }
  double horizon() const { return horizon_; }
  double tol() const { return tol_; }
  const Trajectory& trajectory() const { return trajectory_; }
  /// The time rho reaches r; present iff s < r.
  std::optional<double> entry_time() const { return entry_; }
  bool exact_line() const { return params_.s == 0.0; }

  /// State at 0 <= t <= horizon().
  RadialState state(double t) const;
  double rho(double t) const { return state(t).rho; }
  double rho_prime(double t) const { return state(t).drho; }

  friend RadialSolution solve_radial(const GeodesicParams& p, double T, double tol,
                                     std::shared_ptr<const WarpFunction> warp);

 private:
  GeodesicParams params_{};
  std::shared_ptr<const WarpFunction> warp_;
  double horizon_ = 0.0;
  double tol_ = 0.0;
  Trajectory trajectory_;
  std::optional<double> entry_;
  ode::Field<4> field_;
  ode::Solution<4> solution_;
};

/// `warp` may be supplied to share one profile between several geodesics; it must
/// match (r, eps).
RadialSolution solve_radial(const GeodesicParams& p, double T = kDefaultHorizon,
                            double tol = 1e-12,
                            std::shared_ptr<const WarpFunction> warp = nullptr);

}  // namespace ahwarp
