#pragma once

#include <functional>
#include <utility>

#include "ahwarp/constants.hpp"
#include "ahwarp/jacobi.hpp"

namespace ahwarp {

/// The decaying solution with e^t Y(t) -> 1, on [0, seed_horizon].
struct StableSolution {
  Kind kind = Kind::parallel;
  GeodesicParams params{};
  Trajectory Y;
  double Y0 = 0.0;
  double Y_prime_0 = 0.0;
  /// Y'(0) / Y(0), the derivative at 0 of W = Y / Y(0).
  double W_prime_0 = 0.0;
  double seed_horizon = 0.0;
  /// Estimate of the error in the asymptotic normalization: the larger of the change
  /// of W'(0) between the last two horizons and half the tail integral of |k + 1|.
  double seed_residual = 0.0;

  double W(double t) const { return Y.value(t) / Y0; }
};

struct StableOptions {
  double tol = 1e-12;           ///< integration tolerance
  double horizon = 30.0;        ///< first seed horizon
  double horizon_step = 5.0;    ///< increment of the horizon loop
  double horizon_max = 60.0;    ///< give up beyond this
  double accept = 1e-10;        ///< accepted change of W'(0) between horizons
};

/// Seeds (e^-T, -e^-T) at T and integrates back to 0, increasing T until W'(0) moves by
/// less than `opt.accept`. The kernel's radial solution must reach T + horizon_step.
/// Throws CertificateError if the horizon never stabilizes.
StableSolution stable_solution(const JacobiKernel& kernel, const StableOptions& opt = {});

/// Builds the radial solution to the needed horizon, then the stable solution.
StableSolution stable_solution(Kind kind, const GeodesicParams& p, const StableOptions& opt = {});

/// W'(0); throws CertificateError when Y(0) <= 0.
double certificate(Kind kind, const GeodesicParams& p, const StableOptions& opt = {});

/// Closed-form W'(0) at (s, pi/4, 0).
double closed_certificate(Kind kind, double s);

/// One-sided stencils at s = 0:
/// d1 = (-3 f(0) + 4 f(h) - f(2h)) / (2h), d2 = (2 f(0) - 5 f(h) + 4 f(2h) - f(3h)) / h^2.
std::pair<double, double> stencil_derivatives(const std::function<double(double)>& f, double h);

/// Stencils of s -> W'(0) at s = 0 for the given (r, eps); h in [1e-3, 1e-1].
std::pair<double, double> certificate_s_derivatives(Kind kind, double r, double eps, double h,
                                                    const StableOptions& opt = {});

enum class DoubleZeroVerdict { no_double_zeros, double_zero_exists };

std::string to_string(DoubleZeroVerdict v);

struct CriterionResult {
  DoubleZeroVerdict verdict = DoubleZeroVerdict::no_double_zeros;
  /// |W'(0)| < tol_sign / 10: the boundary case of the criterion.
  bool marginal = false;
  double certificate = 0.0;
};

/// No solution vanishes twice iff W'(0) <= tol_sign.
CriterionResult no_double_zero_criterion(Kind kind, const GeodesicParams& p,
                                         const StableOptions& opt = {},
                                         double tol_sign = kSignTolerance);

}  // namespace ahwarp
