#include "ahwarp/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ahwarp/constants.hpp"
#include "ahwarp/errors.hpp"

namespace ahwarp {

namespace {

// A'/A for the branch selected by the side (eps = 0) or by rho (eps > 0). For the
// transition the carried values of A and A' are used.
double log_warp(const WarpFunction& w, const ode::State<4>& y, ode::Side side) {
  const auto& p = w.params();
  const double rho = y[0];
  bool inner, outer;
  if (p.eps == 0.0) {
    inner = side == ode::Side::below;
    outer = !inner;
  } else {
    inner = rho <= p.r;
    outer = rho >= p.r + p.eps;
  }
  if (inner) return std::cos(rho) / std::sin(rho);
  if (outer) {
    const double ep = w.a_plus() * std::exp(rho), em = w.a_minus() * std::exp(-rho);
    return (ep - em) / (ep + em);
  }
  return y[3] / y[2];
}

double k_par_branch(const WarpFunction& w, double rho, ode::Side side) {
  if (w.params().eps == 0.0) return side == ode::Side::below ? 1.0 : -1.0;
  return k_parallel(w.params(), rho);
}

}  // namespace

void GeodesicParams::validate() const {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw ParameterError("geodesic: s must be nonnegative, got " + std::to_string(s));
  profile().validate();
}

double entry_time(double s, double r) {
  if (!(s >= 0.0 && s < r))
    throw ParameterError("entry_time: needs 0 <= s < r (s=" + std::to_string(s) +
                         ", r=" + std::to_string(r) + ")");
  return std::acos(std::cos(r) / std::cos(s));
}

double radial_exit_slope(double s, double r) {
  if (!(s >= 0.0 && s < r))
    throw ParameterError("radial_exit_slope: needs 0 <= s < r");
  const double cs = std::cos(s), cr = std::cos(r);
  return std::sqrt((cs - cr) * (cs + cr)) / std::sin(r);
}

double closed_F(double t, double s) {
  const double l = entry_time(s, kQuarterPi);
  return std::cosh(t - l) + std::sqrt(std::cos(2.0 * s)) * std::sinh(t - l);
}

double closed_log_F(double t, double s) {
  const double l = entry_time(s, kQuarterPi);
  const double c = std::sqrt(std::cos(2.0 * s)), x = t - l;
  if (x < 0.0) return std::log(closed_F(t, s));
  return x + std::log(0.5 * (1.0 + c) + 0.5 * (1.0 - c) * std::exp(-2.0 * x));
}

double closed_rho(double s, double t) {
  if (!(s >= 0.0)) throw ParameterError("closed_rho: s must be nonnegative");
  const double at = std::abs(t);
  if (s >= kQuarterPi) return s + at + std::log1p(std::exp(-2.0 * at)) - std::log(2.0);
  if (at <= entry_time(s, kQuarterPi)) {
    const double ss = std::sin(s), cs = std::cos(s), st = std::sin(at);
    return std::atan2(std::sqrt(ss * ss + cs * cs * st * st), cs * std::cos(at));
  }
  return kQuarterPi + closed_log_F(at, s);
}

double closed_rho_prime(double s, double t) {
  if (!(s >= 0.0)) throw ParameterError("closed_rho_prime: s must be nonnegative");
  const double sign = t < 0.0 ? -1.0 : 1.0, at = std::abs(t);
  if (s >= kQuarterPi) return std::tanh(t);
  const double l = entry_time(s, kQuarterPi);
  if (at <= l) {
    const double ss = std::sin(s), cs = std::cos(s), st = std::sin(at);
    const double d = std::sqrt(ss * ss + cs * cs * st * st);
    if (d == 0.0) return sign;
    return sign * cs * st / d;
  }
  const double c = std::sqrt(std::cos(2.0 * s)), x = at - l;
  return sign * (std::sinh(x) + c * std::cosh(x)) / (std::cosh(x) + c * std::sinh(x));
}

double closed_theta(double s, double t) {
  if (!(s >= 0.0)) throw ParameterError("closed_theta: s must be nonnegative");
  if (s >= kQuarterPi) return kSqrt2 * std::tanh(t) * std::exp(-s + kQuarterPi);
  const double at = std::abs(t), sign = t < 0.0 ? -1.0 : 1.0;
  const double l = entry_time(s, kQuarterPi);
  if (at <= l) return std::atan2(std::sin(t), std::sin(s) * std::cos(t));
  const double junction = std::atan2(std::sqrt(std::cos(2.0 * s)), std::sin(s));
  return sign * (2.0 * std::sin(s) * std::sinh(at - l) / closed_F(at, s) + junction);
}

double comparison_lower_bound(double a, double s, double v, double t) {
  if (!(a > 0.0)) throw ParameterError("comparison_lower_bound: a must be positive");
  if (!(std::abs(v) <= 1.0)) throw ParameterError("comparison_lower_bound: needs |v| <= 1");
  const double x = a * t;
  if (x >= 0.0) return s + (x + std::log(0.5 * ((1.0 + v) + (1.0 - v) * std::exp(-2.0 * x)))) / a;
  return s + (-x + std::log(0.5 * ((1.0 + v) * std::exp(2.0 * x) + (1.0 - v)))) / a;
}

RadialSolution solve_radial(const GeodesicParams& p, double T, double tol,
                            std::shared_ptr<const WarpFunction> warp) {
  p.validate();
  if (!(T > 0.0)) throw ParameterError("solve_radial: horizon must be positive");
  if (!(tol > 0.0)) throw ParameterError("solve_radial: tol must be positive");
  if (!warp) {
    warp = std::make_shared<const WarpFunction>(solve_warp(p.profile(), std::min(tol, 1e-12)));
  } else if (warp->params().r != p.r || warp->params().eps != p.eps) {
    throw ParameterError("solve_radial: supplied warp does not match (r, eps)");
  }

  RadialSolution out;
  out.params_ = p;
  out.warp_ = warp;
  out.horizon_ = T;
  out.tol_ = tol;

  if (p.s == 0.0) {
    // Radial geodesic: rho = t exactly, sampled on a uniform grid plus the entry time.
    std::vector<double> t;
    const int n = std::max(2, static_cast<int>(std::ceil(T / 0.05)) + 1);
    for (int i = 0; i < n; ++i) t.push_back(T * i / (n - 1));
    std::vector<ode::Event> events;
    if (p.r < T) {
      out.entry_ = p.r;
      events.push_back({p.r, "rho=r"});
      if (std::find(t.begin(), t.end(), p.r) == t.end()) {
        t.push_back(p.r);
        std::sort(t.begin(), t.end());
      }
    }
    std::vector<double> x = t, dx(t.size(), 1.0), acc(t.size(), 0.0);
    out.trajectory_ = Trajectory(std::move(t), std::move(x), std::move(dx), acc, acc,
                                 std::move(events));
    return out;
  }

  const WarpFunction* wp = warp.get();
  out.field_.label = "rho=r";
  out.field_.rhs = [wp](double, const ode::State<4>& y, ode::Side side, ode::State<4>& dy) {
    dy[0] = y[1];
    dy[1] = log_warp(*wp, y, side) * (1.0 - y[1] * y[1]);
    dy[2] = y[3] * y[1];
    dy[3] = -k_par_branch(*wp, y[0], side) * y[2] * y[1];
  };
  const double r = p.r;
  out.field_.switching = [r](double, const ode::State<4>& y) { return y[0] - r; };
  if (p.s == p.r) out.field_.initial_side = ode::Side::above;

  auto opt = ode::Options::with_tol(tol);
  opt.max_step = 0.25;
  const ode::State<4> y0{p.s, 0.0, warp->value(p.s), warp->deriv(p.s)};
  out.solution_ = ode::integrate_ivp(out.field_, 0.0, y0, T, opt);
  if (!out.solution_.events.empty()) {
    if (p.s >= p.r || out.solution_.events.size() != 1)
      throw IntegrationError("solve_radial: unexpected crossings of rho = r");
    out.entry_ = out.solution_.events.front().t;
  }
  out.trajectory_ = Trajectory::from_solution(out.solution_, 0);
  return out;
}

RadialState RadialSolution::state(double t) const {
  if (!(t >= 0.0 && t <= horizon_))
    throw ParameterError("RadialSolution: t=" + std::to_string(t) + " outside [0, horizon]");
  if (exact_line()) return {t, 1.0, warp_->value(t), warp_->deriv(t)};
  const auto y = ode::state_at(field_, solution_, t);
  return {y[0], y[1], y[2], y[3]};
}

}  // namespace ahwarp
