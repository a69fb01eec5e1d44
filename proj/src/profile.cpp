#include "ahwarp/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "ahwarp/constants.hpp"
#include "ahwarp/errors.hpp"

namespace ahwarp {

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

void ProfileParams::validate() const {
  if (!(r > 0.0) || !std::isfinite(r))
    throw ParameterError("profile: r must be positive, got " + std::to_string(r));
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw ParameterError("profile: eps must be nonnegative, got " + std::to_string(eps));
  if (!(r + eps < kHalfPi))
    throw ParameterError("profile: r + eps must stay below pi/2");
}

bool ProfileParams::in_default_domain() const {
  return std::abs(r - kQuarterPi) <= kRadiusHalfWidth && eps >= 0.0 && eps <= kEpsGridMax;
}

double mollifier(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump(x), b = bump(1.0 - x);
  return a / (a + b);
}

double k_parallel(const ProfileParams& p, double rho) {
  if (p.eps == 0.0) return rho > p.r ? -1.0 : 1.0;
  return 1.0 - 2.0 * mollifier((rho - p.r) / p.eps);
}

WarpFunction solve_warp(const ProfileParams& p, double tol) {
  p.validate();
  if (!(tol > 0.0)) throw ParameterError("solve_warp: tol must be positive");
  WarpFunction w;
  w.params_ = p;
  w.tol_ = tol;
  if (p.eps == 0.0) {
    w.a_plus_ = 0.5 * std::exp(-p.r) * (std::sin(p.r) + std::cos(p.r));
    w.a_minus_ = 0.5 * std::exp(p.r) * (std::sin(p.r) - std::cos(p.r));
    return w;
  }
  w.field_.label = "transition";
  w.field_.rhs = [p](double rho, const ode::State<2>& y, ode::Side, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = -k_parallel(p, rho) * y[0];
  };
  auto opt = ode::Options::with_tol(tol);
  opt.max_step = p.eps / 64.0;
  w.transition_ =
      ode::integrate_ivp(w.field_, p.r, {std::sin(p.r), std::cos(p.r)}, p.r + p.eps, opt);
  const auto& end = w.transition_.y.back();
  const double rho1 = p.r + p.eps;
  w.a_plus_ = 0.5 * (end[0] + end[1]) * std::exp(-rho1);
  w.a_minus_ = 0.5 * (end[0] - end[1]) * std::exp(rho1);
  return w;
}

double WarpFunction::exterior_value(double rho) const {
  return a_plus_ * std::exp(rho) + a_minus_ * std::exp(-rho);
}

double WarpFunction::exterior_deriv(double rho) const {
  return a_plus_ * std::exp(rho) - a_minus_ * std::exp(-rho);
}

double WarpFunction::value(double rho) const {
  if (rho < 0.0) throw ParameterError("warp: rho must be nonnegative");
  if (rho <= params_.r) return std::sin(rho);
  if (rho >= params_.r + params_.eps) return exterior_value(rho);
  return ode::state_at(field_, transition_, rho)[0];
}

double WarpFunction::deriv(double rho) const {
  if (rho < 0.0) throw ParameterError("warp: rho must be nonnegative");
  if (rho <= params_.r) return std::cos(rho);
  if (rho >= params_.r + params_.eps) return exterior_deriv(rho);
  return ode::state_at(field_, transition_, rho)[1];
}

double WarpFunction::log_deriv(double rho) const {
  if (!(rho > 0.0)) throw ParameterError("warp: log derivative needs rho > 0");
  if (rho <= params_.r) return 1.0 / std::tan(rho);
  if (rho >= params_.r + params_.eps) {
    const double ep = a_plus_ * std::exp(rho), em = a_minus_ * std::exp(-rho);
    return (ep - em) / (ep + em);
  }
  const auto y = ode::state_at(field_, transition_, rho);
  return y[1] / y[0];
}

std::pair<double, double> WarpFunction::matching_defect() const {
  if (params_.eps == 0.0) return {0.0, 0.0};
  const double rho1 = params_.r + params_.eps;
  const auto& end = transition_.y.back();
  return {std::abs(end[0] - exterior_value(rho1)), std::abs(end[1] - exterior_deriv(rho1))};
}

double k_perp(const WarpFunction& w, double rho) {
  if (!(rho > 0.0)) throw ParameterError("k_perp: rho must be positive");
  const auto& p = w.params();
  if (rho <= p.r) return 1.0;
  if (rho >= p.r + p.eps) {
    // A'^2 - A^2 = -4 a_plus a_minus on the exterior; this form avoids cancellation.
    const double a = w.exterior_value(rho);
    return -1.0 + (1.0 + 4.0 * w.a_plus() * w.a_minus()) / (a * a);
  }
  const double a = w.value(rho), d = w.deriv(rho);
  return (1.0 - d * d) / (a * a);
}

double sec_interpolated(const WarpFunction& w, double rho, double cos_alpha) {
  if (!(cos_alpha >= -1.0 && cos_alpha <= 1.0))
    throw ParameterError("sec_interpolated: cos_alpha must lie in [-1, 1]");
  const double c2 = cos_alpha * cos_alpha;
  return c2 * k_parallel(w.params(), rho) + (1.0 - c2) * k_perp(w, rho);
}

double nontrapping_rate(const WarpFunction& w) {
  const auto& p = w.params();
  double lo = 1.0 / std::tan(p.r);
  const double rho1 = p.r + p.eps;
  lo = std::min({lo, w.log_deriv(rho1), 1.0});
  if (p.eps > 0.0) {
    // Sample the transition; (A'/A)' = -K_par - (A'/A)^2 bounds the gap between samples.
    constexpr int n = 2000;
    const double step = p.eps / n;
    double lip = 0.0, best = lo;
    for (int i = 0; i <= n; ++i) {
      const double q = w.log_deriv(p.r + i * step);
      best = std::min(best, q);
      lip = std::max(lip, 1.0 + q * q);
    }
    lo = std::min(lo, best - step * lip);
  }
  if (!(lo > 0.0)) throw CertificateError("nontrapping_rate: no positive lower bound found");
  return lo;
}

double negative_curvature_radius(const WarpFunction& w) {
  const auto& p = w.params();
  const double rho_par = p.eps == 0.0 ? p.r : p.r + 0.5 * p.eps;
  // K_perp < 0 iff A' > 1, and A' increases once K_par < 0.
  const double disc = 1.0 + 4.0 * w.a_plus() * w.a_minus();
  double rho_perp = std::numeric_limits<double>::quiet_NaN();
  if (disc >= 0.0) {
    const double x = (1.0 + std::sqrt(disc)) / (2.0 * w.a_plus());
    if (x > 0.0 && std::log(x) >= p.r + p.eps) rho_perp = std::log(x);
  }
  if (std::isnan(rho_perp)) {
    auto f = [&w](double rho) { return w.deriv(rho) - 1.0; };
    const double a = rho_par, b = p.r + p.eps;
    if (!(f(a) < 0.0 && f(b) > 0.0))
      throw CertificateError("negative_curvature_radius: A' = 1 not bracketed");
    std::uintmax_t iters = 200;
    auto br = boost::math::tools::toms748_solve(
        f, a, b, [](double u, double v) { return std::abs(v - u) < 1e-15; }, iters);
    rho_perp = br.second;
  }
  return std::max(rho_par, rho_perp);
}

double negative_curvature_radius(const std::vector<WarpFunction>& warps) {
  double out = 0.0;
  for (const auto& w : warps) out = std::max(out, negative_curvature_radius(w));
  return out;
}

}  // namespace ahwarp
