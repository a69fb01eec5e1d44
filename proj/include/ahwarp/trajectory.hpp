#pragma once

#include <cstddef>
#include <vector>

#include "ahwarp/ode.hpp"

namespace ahwarp {

/// Strictly increasing integration nodes. Every registered event time is a node.
struct TimeGrid {
  std::vector<double> nodes;
  double step_hint = 0.0;

  double t0() const { return nodes.front(); }
  double t1() const { return nodes.back(); }
};

/// A scalar solution x(t) of a second-order equation, sampled at the nodes of its
/// integration with x, x' and the one-sided limits of x''.
///
/// Between nodes the solution is reconstructed by quintic Hermite interpolation, so
/// the reconstruction is only as smooth as the branch it lies on. At event nodes
/// x and x' are shared by both segments while x'' may jump.
class Trajectory {
 public:
  Trajectory() = default;

  /// Builds from explicit samples. `acc_left[i]` and `acc_right[i]` are the limits
  /// of x'' from the left and right of node i.
  Trajectory(std::vector<double> t, std::vector<double> x, std::vector<double> dx,
             std::vector<double> acc_left, std::vector<double> acc_right,
             std::vector<ode::Event> events = {});

  /// Extracts components (value_index, value_index + 1) of an integrated system whose
  /// component value_index + 1 is the derivative of component value_index.
  template <std::size_t N>
  static Trajectory from_solution(const ode::Solution<N>& sol, std::size_t value_index = 0) {
    const std::size_t n = sol.t.size();
    std::vector<double> x(n), dx(n), al(n), ar(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = sol.y[i][value_index];
      dx[i] = sol.y[i][value_index + 1];
      al[i] = sol.f_left[i][value_index + 1];
      ar[i] = sol.f_right[i][value_index + 1];
    }
    return Trajectory(sol.t, std::move(x), std::move(dx), std::move(al), std::move(ar),
                      sol.events);
  }

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& nodes() const { return grid_.nodes; }
  const std::vector<double>& values() const { return x_; }
  const std::vector<double>& derivs() const { return dx_; }
  const std::vector<ode::Event>& events() const { return events_; }
  std::size_t size() const { return x_.size(); }
  bool empty() const { return x_.empty(); }
  double t0() const { return grid_.t0(); }
  double t1() const { return grid_.t1(); }

  /// Interpolated value; t must lie in [t0, t1].
  double value(double t) const;
  double deriv(double t) const;

  /// Multiplies the solution by a constant (the equations are linear or the caller
  /// knows the scaling is meaningful).
  Trajectory scaled(double factor) const;

  /// Smallest interpolated value over [a, b], sampled at the nodes and at `samples`
  /// equally spaced points. Returns (t, value).
  std::pair<double, double> minimum(double a, double b, std::size_t samples = 2001) const;

 private:
  std::size_t segment(double t) const;

  TimeGrid grid_;
  std::vector<double> x_, dx_, acc_left_, acc_right_;
  std::vector<ode::Event> events_;
};

}  // namespace ahwarp
