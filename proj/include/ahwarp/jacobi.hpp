#pragma once

#include <memory>
#include <optional>
#include <string>

#include "ahwarp/geodesics.hpp"
#include "ahwarp/ode.hpp"
#include "ahwarp/trajectory.hpp"

namespace ahwarp {

/// Jacobi fields tangent (parallel) or normal (perpendicular) to the plane of the geodesic.
enum class Kind { parallel, perpendicular };

std::string to_string(Kind k);
/// Accepts "parallel"/"par" and "perpendicular"/"perp".
Kind kind_from_string(const std::string& s);

/// The coefficient k(t) of Y'' + k(t) Y = 0 along a geodesic, for t >= 0.
class JacobiKernel {
 public:
  JacobiKernel(Kind kind, std::shared_ptr<const RadialSolution> radial);

  Kind kind() const { return kind_; }
  const GeodesicParams& params() const { return radial_->params(); }
  const RadialSolution& radial() const { return *radial_; }
  std::shared_ptr<const RadialSolution> radial_ptr() const { return radial_; }
  const WarpFunction& warp() const { return radial_->warp(); }
  double horizon() const { return radial_->horizon(); }

  /// Time of the coefficient's jump (eps = 0 and s < r only).
  std::optional<double> jump_time() const { return jump_; }

  /// k(t); at the jump the inner value is returned.
  double value(double t) const;
  /// k(t) on the given branch (only meaningful at eps = 0).
  double value(double t, ode::Side side) const;

  /// The first-order field (Y, Y') of Y'' = -k Y with its switching function.
  ode::Field<2> field() const;
  /// Two stacked copies, (U, U', V, V').
  ode::Field<4> pair_field() const;

 private:
  Kind kind_;
  std::shared_ptr<const RadialSolution> radial_;
  std::optional<double> jump_;
};

/// Builds the radial solution on [0, T] and wraps it in a kernel.
JacobiKernel make_kernel(Kind kind, const GeodesicParams& p, double T = kDefaultHorizon,
                         double tol = 1e-12);

/// U(0) = 1, U'(0) = 0 and V(0) = 0, V'(0) = 1.
struct FundamentalPair {
  Trajectory U;
  Trajectory V;
  /// max over nodes of |U V' - U' V - 1| / max(1, |U V'| + |U' V|).
  double wronskian_defect = 0.0;
};

FundamentalPair fundamental_pair(const JacobiKernel& kernel, double T, double tol = 1e-12);

// Closed forms for (r, eps) = (pi/4, 0).

double closed_kernel_parallel(double s, double t);
double closed_kernel_perp(double s, double t);
/// U and V of the parallel equation; for s >= pi/4 these are cosh and sinh.
double closed_U_parallel(double s, double t);
double closed_V_parallel(double s, double t);
/// U and V of the perpendicular equation; s > 0.
double closed_U_perp(double s, double t);
double closed_V_perp(double s, double t);

/// arccos(tan s) for 0 <= s <= pi/4, evaluated without the endpoint loss of precision.
double arccos_tan(double s);
/// 2 sin(s) sinh(t - l(s)) / F(t, s) + arccos(tan s); 0 < s < pi/4, t >= l(s).
double Theta(double t, double s);
/// Limit of Theta as t -> infinity; 0 <= s <= pi/4 (the endpoint by continuity).
double theta_infinity(double s);
/// pi/2 - theta_infinity(s), accurate for small s.
double theta_infinity_gap(double s);
/// d/ds theta_infinity.
double theta_infinity_derivative(double s);

}  // namespace ahwarp
