#include "ahwarp/jacobi.hpp"

#include <algorithm>
#include <cmath>

#include "ahwarp/constants.hpp"
#include "ahwarp/errors.hpp"

namespace ahwarp {

std::string to_string(Kind k) { return k == Kind::parallel ? "parallel" : "perpendicular"; }

Kind kind_from_string(const std::string& s) {
  if (s == "parallel" || s == "par") return Kind::parallel;
  if (s == "perpendicular" || s == "perp") return Kind::perpendicular;
  throw ParameterError("unknown Jacobi kind '" + s + "' (expected parallel or perpendicular)");
}

JacobiKernel::JacobiKernel(Kind kind, std::shared_ptr<const RadialSolution> radial)
    : kind_(kind), radial_(std::move(radial)) {
  if (!radial_) throw ParameterError("JacobiKernel: missing radial solution");
  if (params().eps == 0.0 && radial_->entry_time()) jump_ = radial_->entry_time();
}

double JacobiKernel::value(double t) const {
  ode::Side side = ode::Side::above;
  if (jump_) side = t <= *jump_ ? ode::Side::below : ode::Side::above;
  else if (params().s < params().r) side = ode::Side::below;
  return value(t, side);
}

double JacobiKernel::value(double t, ode::Side side) const {
  const auto x = radial_->state(t);
  const auto& p = params();
  const auto& w = warp();
  const bool inner_branch = side == ode::Side::below;
  const double kpar = p.eps == 0.0 ? (inner_branch ? 1.0 : -1.0) : k_parallel(p.profile(), x.rho);
  if (kind_ == Kind::parallel || p.s == 0.0) return kpar;

  double kperp;
  auto exterior = [&w](double rho) {
    const double a = w.exterior_value(rho);
    return -1.0 + (1.0 + 4.0 * w.a_plus() * w.a_minus()) / (a * a);
  };
  if (p.eps == 0.0) {
    kperp = inner_branch ? 1.0 : exterior(x.rho);
  } else if (x.rho <= p.r) {
    kperp = 1.0;
  } else if (x.rho >= p.r + p.eps) {
    kperp = exterior(x.rho);
  } else {
    kperp = (1.0 - x.dwarp * x.dwarp) / (x.warp * x.warp);
  }
  const double c2 = x.drho * x.drho;
  return c2 * kpar + (1.0 - c2) * kperp;
}

ode::Field<2> JacobiKernel::field() const {
  ode::Field<2> f;
  const JacobiKernel self = *this;
  f.label = "kernel jump";
  f.rhs = [self](double t, const ode::State<2>& y, ode::Side side, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = -self.value(t, side) * y[0];
  };
  if (jump_) {
    const double tj = *jump_;
    f.switching = [tj](double t, const ode::State<2>&) { return t - tj; };
  } else {
    f.initial_side = params().s < params().r ? ode::Side::below : ode::Side::above;
  }
  return f;
}

ode::Field<4> JacobiKernel::pair_field() const {
  ode::Field<4> f;
  const JacobiKernel self = *this;
  f.label = "kernel jump";
  f.rhs = [self](double t, const ode::State<4>& y, ode::Side side, ode::State<4>& dy) {
    const double k = self.value(t, side);
    dy[0] = y[1];
    dy[1] = -k * y[0];
    dy[2] = y[3];
    dy[3] = -k * y[2];
  };
  if (jump_) {
    const double tj = *jump_;
    f.switching = [tj](double t, const ode::State<4>&) { return t - tj; };
  } else {
    f.initial_side = params().s < params().r ? ode::Side::below : ode::Side::above;
  }
  return f;
}

JacobiKernel make_kernel(Kind kind, const GeodesicParams& p, double T, double tol) {
  return JacobiKernel(kind, std::make_shared<const RadialSolution>(solve_radial(p, T, tol)));
}

FundamentalPair fundamental_pair(const JacobiKernel& kernel, double T, double tol) {
  if (!(T > 0.0)) throw ParameterError("fundamental_pair: horizon must be positive");
  if (T > kernel.horizon() * (1.0 + 1e-15))
    throw ParameterError("fundamental_pair: horizon exceeds the radial solution");
  T = std::min(T, kernel.horizon());
  const auto sol =
      ode::integrate_ivp(kernel.pair_field(), 0.0, {1.0, 0.0, 0.0, 1.0}, T,
                         ode::Options::with_tol(tol));
  FundamentalPair out;
  out.U = Trajectory::from_solution(sol, 0);
  out.V = Trajectory::from_solution(sol, 2);
  for (const auto& y : sol.y) {
    const double a = y[0] * y[3], b = y[1] * y[2];
    out.wronskian_defect =
        std::max(out.wronskian_defect, std::abs(a - b - 1.0) / std::max(1.0, std::abs(a) + std::abs(b)));
  }
  return out;
}

double closed_kernel_parallel(double s, double t) {
  return closed_rho(s, t) > kQuarterPi ? -1.0 : 1.0;
}

double closed_kernel_perp(double s, double t) {
  const double at = std::abs(t);
  if (s >= kQuarterPi) {
    const double sech = 1.0 / std::cosh(at);
    return -1.0 + 2.0 * std::exp(-2.0 * s + kHalfPi) * std::pow(sech, 4);
  }
  if (at <= entry_time(s, kQuarterPi)) return 1.0;
  const double ss = std::sin(s);
  return -1.0 + 4.0 * ss * ss * std::exp(-4.0 * closed_log_F(at, s));
}

double closed_U_parallel(double s, double t) {
  const double at = std::abs(t);
  if (s >= kQuarterPi) return std::cosh(at);
  const double l = entry_time(s, kQuarterPi);
  if (at <= l) return std::cos(at);
  return std::cos(l) * std::cosh(at - l) - std::sin(l) * std::sinh(at - l);
}

double closed_V_parallel(double s, double t) {
  const double at = std::abs(t), sign = t < 0.0 ? -1.0 : 1.0;
  if (s >= kQuarterPi) return std::sinh(t);
  const double l = entry_time(s, kQuarterPi);
  if (at <= l) return std::sin(t);
  return sign * (std::sin(l) * std::cosh(at - l) + std::cos(l) * std::sinh(at - l));
}

namespace {

// Phase offset beta - 2 sin(s) sinh(t - l) / F with beta = arcsin(tan s), so that
// cos(Theta) = sin(phase) and sin(Theta) = cos(phase).
double perp_phase(double s, double at) {
  const double l = entry_time(s, kQuarterPi);
  const double beta = std::asin(std::tan(s));
  return beta - 2.0 * std::sin(s) * std::sinh(at - l) / closed_F(at, s);
}

}  // namespace

double closed_U_perp(double s, double t) {
  if (!(s > 0.0)) throw ParameterError("closed_U_perp: requires s > 0");
  const double at = std::abs(t);
  if (s >= kQuarterPi) {
    const double w = kSqrt2 * std::exp(-s + kQuarterPi);
    return std::cosh(at) * std::cos(w * std::tanh(at));
  }
  if (at <= entry_time(s, kQuarterPi)) return std::cos(at);
  return 0.5 * kSqrt2 / std::sin(s) * closed_F(at, s) * std::sin(perp_phase(s, at));
}

double closed_V_perp(double s, double t) {
  if (!(s > 0.0)) throw ParameterError("closed_V_perp: requires s > 0");
  const double at = std::abs(t), sign = t < 0.0 ? -1.0 : 1.0;
  if (s >= kQuarterPi) {
    const double w = kSqrt2 * std::exp(-s + kQuarterPi);
    return sign * std::cosh(at) * std::sin(w * std::tanh(at)) / w;
  }
  if (at <= entry_time(s, kQuarterPi)) return std::sin(t);
  return sign * 0.5 * kSqrt2 * closed_F(at, s) * std::cos(perp_phase(s, at));
}

double arccos_tan(double s) {
  if (!(s >= 0.0 && s <= kQuarterPi)) throw ParameterError("arccos_tan: needs 0 <= s <= pi/4");
  return std::atan2(std::sqrt(std::max(0.0, std::cos(2.0 * s))), std::sin(s));
}

double Theta(double t, double s) {
  if (!(s > 0.0 && s < kQuarterPi)) throw ParameterError("Theta: needs 0 < s < pi/4");
  const double l = entry_time(s, kQuarterPi);
  if (t < l) throw ParameterError("Theta: needs t >= entry time");
  return 2.0 * std::sin(s) * std::sinh(t - l) / closed_F(t, s) + arccos_tan(s);
}

double theta_infinity(double s) {
  if (!(s >= 0.0 && s <= kQuarterPi))
    throw ParameterError("theta_infinity: needs 0 <= s <= pi/4");
  // The square-root singularities of the two terms at s = pi/4 cancel; this
  // rearrangement keeps them apart from the leading 2 sin(s).
  const double cs = std::cos(s), sn = std::sin(s), c2 = std::max(0.0, std::cos(2.0 * s));
  const double c = std::sqrt(c2), x = c / cs, d = cs - sn;
  return 2.0 * sn + (c2 + c * d * d) / (cs * (1.0 + c)) + (std::asin(std::min(x, 1.0)) - x);
}

double theta_infinity_gap(double s) {
  if (!(s >= 0.0 && s <= kQuarterPi))
    throw ParameterError("theta_infinity_gap: needs 0 <= s <= pi/4");
  if (s < 1e-3) return s * s * s / 6.0 + 7.0 / 60.0 * std::pow(s, 5);
  const double c = std::sqrt(std::max(0.0, std::cos(2.0 * s)));
  return std::asin(std::min(1.0, std::tan(s))) - 2.0 * std::sin(s) / (1.0 + c);
}

double theta_infinity_derivative(double s) {
  if (!(s >= 0.0 && s <= kQuarterPi))
    throw ParameterError("theta_infinity_derivative: needs 0 <= s <= pi/4");
  const double c = std::sqrt(std::max(0.0, std::cos(2.0 * s))), sn = std::sin(s);
  return -2.0 * sn * sn / (std::cos(s) * (1.0 + c) * (1.0 + c));
}

}  // namespace ahwarp
