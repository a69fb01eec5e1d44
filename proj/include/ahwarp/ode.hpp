/**
 * @file ode.hpp
 * @brief Dormand-Prince 5(4) integration of first-order systems whose
 *        right-hand side is smooth on either side of a switching surface.
 *
 * The field is evaluated with an explicit side argument. Within a step the side
 * is frozen, so every stage sees one smooth branch. When the switching function
 * changes sign across an accepted step, the crossing is bracketed on the step map
 * itself (re-stepping from the left node to trial lengths), the step is retaken to
 * end on the crossing, and integration restarts there on the other branch. The
 * resulting node sequence therefore always contains the crossing time and no
 * step straddles the surface.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "ahwarp/errors.hpp"

namespace ahwarp::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// Which smooth branch of a piecewise field is active. A switching value of
/// exactly zero belongs to `below`.
enum class Side : int { below = -1, above = 1 };

inline Side side_of(double g) { return g > 0.0 ? Side::above : Side::below; }
inline Side flip(Side s) { return s == Side::above ? Side::below : Side::above; }

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double max_step = 0.0;      // 0: unbounded
  double initial_step = 0.0;  // 0: chosen from the interval length
  double fixed_step = 0.0;    // > 0 disables error control
  std::size_t max_steps = 5'000'000;

  static Options with_tol(double tol) {
    Options o;
    o.rtol = tol;
    o.atol = tol * 1e-6;
    return o;
  }
};

struct Event {
  double t = 0.0;
  std::string label;

  friend bool operator==(const Event&, const Event&) = default;
};

template <std::size_t N>
struct Field {
  std::function<void(double, const State<N>&, Side, State<N>&)> rhs;
  /// Optional; its sign selects the branch.
  std::function<double(double, const State<N>&)> switching;
  /// Overrides the side inferred from the switching value at the start.
  std::optional<Side> initial_side;
  std::string label = "switch";
};

/// Nodes of an integration together with the one-sided field values at each node.
template <std::size_t N>
struct Solution {
  std::vector<double> t;
  std::vector<State<N>> y;
  std::vector<State<N>> f_left;
  std::vector<State<N>> f_right;
  /// Branch used on the step leaving each node (the last entry repeats the final branch).
  std::vector<Side> sides;
  std::vector<Event> events;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

struct Dp5 {
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
};

template <std::size_t N>
struct StepResult {
  State<N> y;
  State<N> k7;  // field at the new point (first-same-as-last)
  State<N> err;
};

template <std::size_t N>
StepResult<N> dp5_step(const Field<N>& field, Side side, double t, const State<N>& y,
                       const State<N>& k1, double h) {
  using C = Dp5;
  State<N> k2, k3, k4, k5, k6, tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * C::a21 * k1[i];
  field.rhs(t + C::c2 * h, tmp, side, k2);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (C::a31 * k1[i] + C::a32 * k2[i]);
  field.rhs(t + C::c3 * h, tmp, side, k3);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (C::a41 * k1[i] + C::a42 * k2[i] + C::a43 * k3[i]);
  field.rhs(t + C::c4 * h, tmp, side, k4);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (C::a51 * k1[i] + C::a52 * k2[i] + C::a53 * k3[i] + C::a54 * k4[i]);
  field.rhs(t + C::c5 * h, tmp, side, k5);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (C::a61 * k1[i] + C::a62 * k2[i] + C::a63 * k3[i] + C::a64 * k4[i] +
                         C::a65 * k5[i]);
  field.rhs(t + h, tmp, side, k6);

  StepResult<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out.y[i] = y[i] + h * (C::b1 * k1[i] + C::b3 * k3[i] + C::b4 * k4[i] + C::b5 * k5[i] +
                           C::b6 * k6[i]);
  field.rhs(t + h, out.y, side, out.k7);
  for (std::size_t i = 0; i < N; ++i)
    out.err[i] = h * (C::e1 * k1[i] + C::e3 * k3[i] + C::e4 * k4[i] + C::e5 * k5[i] +
                      C::e6 * k6[i] + C::e7 * out.k7[i]);
  return out;
}

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y0, const State<N>& y1,
                  const Options& opt) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double scale = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

inline std::string where(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

}  // namespace detail

/// Integrates forward from t0 to t1 (t1 > t0).
template <std::size_t N>
Solution<N> integrate_ivp(const Field<N>& field, double t0, const State<N>& y0, double t1,
                          const Options& opt) {
  if (!(t1 > t0)) throw ParameterError("integrate_ivp: requires t1 > t0");
  if (!field.rhs) throw ParameterError("integrate_ivp: empty right-hand side");

  const bool has_switch = static_cast<bool>(field.switching);
  Side side = Side::below;
  if (field.initial_side) {
    side = *field.initial_side;
  } else if (has_switch) {
    const double g0 = field.switching(t0, y0);
    if (g0 != 0.0) {
      side = side_of(g0);
    } else {
      // On the surface: follow the direction the below-branch flow points.
      State<N> f0;
      field.rhs(t0, y0, Side::below, f0);
      const double probe = 1e-7 * std::max(1.0, t1 - t0);
      State<N> yp;
      for (std::size_t i = 0; i < N; ++i) yp[i] = y0[i] + probe * f0[i];
      side = side_of(field.switching(t0 + probe, yp));
    }
  }

  Solution<N> sol;
  double t = t0;
  State<N> y = y0;
  State<N> k1;
  field.rhs(t, y, side, k1);
  sol.t.push_back(t);
  sol.y.push_back(y);
  sol.f_left.push_back(k1);
  sol.f_right.push_back(k1);
  sol.sides.push_back(side);

  const double span = t1 - t0;
  const bool adaptive = !(opt.fixed_step > 0.0);
  double h = adaptive ? (opt.initial_step > 0.0 ? opt.initial_step : 1e-3 * span) : opt.fixed_step;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps)
      throw IntegrationError("step budget exhausted at t=" + detail::where(t));
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    bool last = false;
    if (t + h >= t1 || t1 - (t + h) < 1e-12 * span) {
      h = t1 - t;
      last = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw IntegrationError("step size underflow at t=" + detail::where(t) +
                             " (non-Lipschitz or stiff right-hand side)");

    auto trial = detail::dp5_step(field, side, t, y, k1, h);
    double err = 0.0;
    if (adaptive) {
      err = detail::error_norm(trial.err, y, trial.y, opt);
      if (!std::isfinite(err) || err > 1.0) {
        ++sol.rejected;
        const double shrink = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h *= shrink;
        continue;
      }
    }
    ++sol.accepted;
    double t_new = last ? t1 : t + h;

    if (has_switch) {
      const double g_new = field.switching(t_new, trial.y);
      if (side_of(g_new) != side) {
        // Bracket the crossing on [0, h]: g has the old side's sign at 0.
        const double g_start = field.switching(t, y);
        auto g_at = [&](double tau) {
          if (tau <= 0.0) return g_start;
          auto s = detail::dp5_step(field, side, t, y, k1, tau);
          return field.switching(t + tau, s.y);
        };
        const double g_a = (side_of(g_start) == side)
                               ? g_start
                               : static_cast<int>(side) * std::numeric_limits<double>::min();
        double tau_old = 0.0;  // longest trial length known to stay on the old side
        if (g_new == 0.0) {
          tau_old = h;
        } else {
          std::uintmax_t iters = 200;
          auto close_enough = [span](double a, double b) {
            return std::abs(b - a) <=
                   4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, span);
          };
          std::pair<double, double> br;
          try {
            br = boost::math::tools::toms748_solve(g_at, 0.0, h, g_a, g_new, close_enough, iters);
          } catch (const std::exception& ex) {
            throw IntegrationError("event bracketing failed near t=" + detail::where(t) +
                                   " (tangential crossing?): " + ex.what());
          }
          if (iters >= 200)
            throw IntegrationError("event bracketing did not converge near t=" +
                                   detail::where(t) + " (tangential crossing?)");
          if (side_of(g_at(br.first)) == side)
            tau_old = br.first;
          else if (side_of(g_at(br.second)) == side)
            tau_old = br.second;
        }
        if (tau_old > 0.0) {
          trial = detail::dp5_step(field, side, t, y, k1, tau_old);
          t_new = t + tau_old;
          last = false;
          sol.t.push_back(t_new);
          sol.y.push_back(trial.y);
          sol.f_left.push_back(trial.k7);
          side = flip(side);
          field.rhs(t_new, trial.y, side, k1);
          sol.f_right.push_back(k1);
          sol.sides.push_back(side);
          sol.events.push_back({t_new, field.label});
          t = t_new;
          y = trial.y;
        } else {
          // Crossing at the current node: switch branch in place.
          side = flip(side);
          field.rhs(t, y, side, k1);
          sol.f_right.back() = k1;
          sol.sides.back() = side;
          sol.events.push_back({t, field.label});
        }
        continue;
      }
    }

    sol.t.push_back(t_new);
    sol.y.push_back(trial.y);
    sol.f_left.push_back(trial.k7);
    sol.f_right.push_back(trial.k7);
    sol.sides.push_back(side);
    t = t_new;
    y = trial.y;
    k1 = trial.k7;
    if (adaptive) {
      const double grow = err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
      h *= grow;
    }
    if (last) break;
  }
  return sol;
}

/// Integrates the problem posed at T back to t0 < T. Runs forward in tau = T - t with
/// the sign-flipped field and maps the nodes back to increasing t.
template <std::size_t N>
Solution<N> integrate_backward(const Field<N>& field, double T, const State<N>& yT, double t0,
                               const Options& opt) {
  if (!(T > t0)) throw ParameterError("integrate_backward: requires T > t0");
  Field<N> rev;
  rev.label = field.label;
  rev.initial_side = field.initial_side;
  rev.rhs = [&field, T](double tau, const State<N>& y, Side side, State<N>& dy) {
    field.rhs(T - tau, y, side, dy);
    for (auto& v : dy) v = -v;
  };
  if (field.switching)
    rev.switching = [&field, T](double tau, const State<N>& y) { return field.switching(T - tau, y); };

  auto fwd = integrate_ivp(rev, 0.0, yT, T - t0, opt);

  Solution<N> out;
  const std::size_t n = fwd.t.size();
  out.t.resize(n);
  out.y.resize(n);
  out.f_left.resize(n);
  out.f_right.resize(n);
  out.sides.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    out.t[i] = T - fwd.t[j];
    out.y[i] = fwd.y[j];
    // Left in t is right in tau; derivatives change sign.
    for (std::size_t c = 0; c < N; ++c) {
      out.f_left[i][c] = -fwd.f_right[j][c];
      out.f_right[i][c] = -fwd.f_left[j][c];
    }
    out.sides[i] = fwd.sides[j == 0 ? 0 : j - 1];
  }
  out.t.front() = t0;
  out.t.back() = T;
  for (auto it = fwd.events.rbegin(); it != fwd.events.rend(); ++it)
    out.events.push_back({T - it->t, it->label});
  out.accepted = fwd.accepted;
  out.rejected = fwd.rejected;
  return out;
}

/// State at an arbitrary t in [sol.t.front(), sol.t.back()], obtained by re-taking a
/// partial step from the node at or before t on the branch recorded for that step.
/// The local error of a partial step is no larger than that of the accepted one.
template <std::size_t N>
State<N> state_at(const Field<N>& field, const Solution<N>& sol, double t) {
  const auto& ts = sol.t;
  if (ts.size() < 2 || t < ts.front() || t > ts.back())
    throw ParameterError("state_at: t=" + detail::where(t) + " outside the solution range");
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t i = static_cast<std::size_t>(it - ts.begin());
  i = (i == 0) ? 0 : i - 1;
  if (i >= ts.size() - 1) return sol.y.back();
  const double h = t - ts[i];
  if (h == 0.0) return sol.y[i];
  return detail::dp5_step(field, sol.sides[i], ts[i], sol.y[i], sol.f_right[i], h).y;
}

}  // namespace ahwarp::ode
