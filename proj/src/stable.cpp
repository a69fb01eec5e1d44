#include "ahwarp/stable.hpp"

#include <cmath>
#include <memory>

#include "ahwarp/errors.hpp"

namespace ahwarp {

namespace {

struct Backward {
  Trajectory Y;  // seeded with unit magnitude at T
  double w_prime_0;
};

Backward integrate_from(const JacobiKernel& kernel, double T, double tol) {
  // Unit seed; the caller rescales by e^-T. Mixed tolerances then act relative to |Y|.
  const auto sol = ode::integrate_backward(kernel.field(), T, {1.0, -1.0}, 0.0,
                                           ode::Options::with_tol(tol));
  Backward b{Trajectory::from_solution(sol, 0), 0.0};
  b.w_prime_0 = sol.y.front()[1] / sol.y.front()[0];
  return b;
}

double tail_estimate(const JacobiKernel& kernel, double T) {
  const double end = kernel.horizon();
  if (!(end > T)) return 0.0;
  constexpr int n = 200;
  const double h = (end - T) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wgt = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += wgt * std::abs(kernel.value(T + i * h) + 1.0);
  }
  return 0.5 * sum * h;
}

}  // namespace

StableSolution stable_solution(const JacobiKernel& kernel, const StableOptions& opt) {
  if (!(opt.horizon > 0.0 && opt.horizon_step > 0.0 && opt.tol > 0.0))
    throw ParameterError("stable_solution: invalid options");
  double T = opt.horizon;
  if (T + opt.horizon_step > kernel.horizon() * (1.0 + 1e-15))
    throw ParameterError("stable_solution: radial solution too short for the horizon check");
  Backward cur = integrate_from(kernel, T, opt.tol);
  double change = 0.0;
  for (;;) {
    const double next_T = T + opt.horizon_step;
    if (next_T > opt.horizon_max || next_T > kernel.horizon() * (1.0 + 1e-15))
      throw CertificateError("stable_solution: W'(0) did not stabilize up to T=" +
                             std::to_string(T) + " (non-decaying kernel tail?)");
    Backward nxt = integrate_from(kernel, std::min(next_T, kernel.horizon()), opt.tol);
    change = std::abs(nxt.w_prime_0 - cur.w_prime_0);
    if (change < opt.accept) break;
    T = next_T;
    cur = std::move(nxt);
  }

  StableSolution out;
  out.kind = kernel.kind();
  out.params = kernel.params();
  out.seed_horizon = T;
  out.Y = cur.Y.scaled(std::exp(-T));
  out.Y0 = out.Y.values().front();
  out.Y_prime_0 = out.Y.derivs().front();
  out.W_prime_0 = cur.w_prime_0;
  out.seed_residual = std::max(change, tail_estimate(kernel, T));
  return out;
}

StableSolution stable_solution(Kind kind, const GeodesicParams& p, const StableOptions& opt) {
  const double reach = opt.horizon_max;
  auto radial = std::make_shared<const RadialSolution>(solve_radial(p, reach, std::min(opt.tol, 1e-12)));
  return stable_solution(JacobiKernel(kind, radial), opt);
}

double certificate(Kind kind, const GeodesicParams& p, const StableOptions& opt) {
  const auto y = stable_solution(kind, p, opt);
  if (!(y.Y0 > 0.0))
    throw CertificateError("certificate: Y(0) = " + std::to_string(y.Y0) +
                           " is not positive at s=" + std::to_string(p.s) +
                           " r=" + std::to_string(p.r) + " eps=" + std::to_string(p.eps));
  return y.W_prime_0;
}

double closed_certificate(Kind kind, double s) {
  if (!(s >= 0.0)) throw ParameterError("closed_certificate: s must be nonnegative");
  if (kind == Kind::parallel) {
    if (s >= kQuarterPi) return -1.0;
    const double c = std::sqrt(std::cos(2.0 * s));
    return -(1.0 - c) / (1.0 + c);
  }
  if (s == 0.0) return 0.0;
  if (s >= kQuarterPi) {
    const double w = kSqrt2 * std::exp(-s + kQuarterPi);
    return -w / std::tan(w);
  }
  // -csc(s) cot(theta_infinity(s)) with cot(pi/2 - g) = tan(g).
  return -std::tan(theta_infinity_gap(s)) / std::sin(s);
}

std::pair<double, double> stencil_derivatives(const std::function<double(double)>& f, double h) {
  const double f0 = f(0.0), f1 = f(h), f2 = f(2.0 * h), f3 = f(3.0 * h);
  return {(-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h), (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h)};
}

std::pair<double, double> certificate_s_derivatives(Kind kind, double r, double eps, double h,
                                                    const StableOptions& opt) {
  if (!(h >= 1e-3 && h <= 1e-1))
    throw ParameterError("certificate_s_derivatives: h must lie in [1e-3, 1e-1]");
  return stencil_derivatives(
      [&](double s) { return certificate(kind, {s, r, eps}, opt); }, h);
}

std::string to_string(DoubleZeroVerdict v) {
  return v == DoubleZeroVerdict::no_double_zeros ? "no-double-zeros" : "double-zero-exists";
}

CriterionResult no_double_zero_criterion(Kind kind, const GeodesicParams& p,
                                         const StableOptions& opt, double tol_sign) {
  CriterionResult out;
  out.certificate = certificate(kind, p, opt);
  out.verdict = out.certificate <= tol_sign ? DoubleZeroVerdict::no_double_zeros
                                            : DoubleZeroVerdict::double_zero_exists;
  out.marginal = std::abs(out.certificate) < tol_sign / 10.0;
  return out;
}

}  // namespace ahwarp
