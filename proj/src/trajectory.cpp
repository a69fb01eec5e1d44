#include "ahwarp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "ahwarp/errors.hpp"

namespace ahwarp {

namespace {

struct Hermite5 {
  double h0, h1, h2, h3, h4, h5;
};

// Quintic Hermite basis on [0, 1]: value/slope/curvature at both ends.
Hermite5 basis(double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  return {1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5,
          u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5,
          0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5),
          0.5 * (u3 - 2.0 * u4 + u5),
          -4.0 * u3 + 7.0 * u4 - 3.0 * u5,
          10.0 * u3 - 15.0 * u4 + 6.0 * u5};
}

Hermite5 basis_derivative(double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  return {-30.0 * u2 + 60.0 * u3 - 30.0 * u4,
          1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4,
          0.5 * (2.0 * u - 9.0 * u2 + 12.0 * u3 - 5.0 * u4),
          0.5 * (3.0 * u2 - 8.0 * u3 + 5.0 * u4),
          -12.0 * u2 + 28.0 * u3 - 15.0 * u4,
          30.0 * u2 - 60.0 * u3 + 30.0 * u4};
}

}  // namespace

Trajectory::Trajectory(std::vector<double> t, std::vector<double> x, std::vector<double> dx,
                       std::vector<double> acc_left, std::vector<double> acc_right,
                       std::vector<ode::Event> events)
    : x_(std::move(x)),
      dx_(std::move(dx)),
      acc_left_(std::move(acc_left)),
      acc_right_(std::move(acc_right)),
      events_(std::move(events)) {
  grid_.nodes = std::move(t);
  const std::size_t n = grid_.nodes.size();
  if (n < 2 || x_.size() != n || dx_.size() != n || acc_left_.size() != n ||
      acc_right_.size() != n)
    throw ParameterError("Trajectory: inconsistent sample lengths");
  for (std::size_t i = 1; i < n; ++i)
    if (!(grid_.nodes[i] > grid_.nodes[i - 1]))
      throw ParameterError("Trajectory: nodes must be strictly increasing");
  grid_.step_hint = (grid_.t1() - grid_.t0()) / static_cast<double>(n - 1);
}

std::size_t Trajectory::segment(double t) const {
  const auto& nodes = grid_.nodes;
  const double slack = 1e-12 * std::max(1.0, std::abs(nodes.back()));
  if (t < nodes.front() - slack || t > nodes.back() + slack)
    throw ParameterError("Trajectory: t=" + std::to_string(t) + " outside [" +
                         std::to_string(nodes.front()) + ", " + std::to_string(nodes.back()) +
                         "]");
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  std::size_t i = (it == nodes.begin()) ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  return std::min(i, nodes.size() - 2);
}

double Trajectory::value(double t) const {
  const std::size_t i = segment(t);
  const double a = grid_.nodes[i], h = grid_.nodes[i + 1] - a;
  const double u = std::clamp((t - a) / h, 0.0, 1.0);
  const auto b = basis(u);
  return x_[i] * b.h0 + h * dx_[i] * b.h1 + h * h * acc_right_[i] * b.h2 +
         h * h * acc_left_[i + 1] * b.h3 + h * dx_[i + 1] * b.h4 + x_[i + 1] * b.h5;
}

double Trajectory::deriv(double t) const {
  const std::size_t i = segment(t);
  const double a = grid_.nodes[i], h = grid_.nodes[i + 1] - a;
  const double u = std::clamp((t - a) / h, 0.0, 1.0);
  const auto b = basis_derivative(u);
  return (x_[i] * b.h0 + x_[i + 1] * b.h5) / h + dx_[i] * b.h1 + dx_[i + 1] * b.h4 +
         h * (acc_right_[i] * b.h2 + acc_left_[i + 1] * b.h3);
}

Trajectory Trajectory::scaled(double factor) const {
  Trajectory out = *this;
  for (auto* v : {&out.x_, &out.dx_, &out.acc_left_, &out.acc_right_})
    for (double& e : *v) e *= factor;
  return out;
}

std::pair<double, double> Trajectory::minimum(double a, double b, std::size_t samples) const {
  a = std::max(a, t0());
  b = std::min(b, t1());
  std::pair<double, double> best{a, value(a)};
  auto consider = [&](double t) {
    const double v = value(t);
    if (v < best.second) best = {t, v};
  };
  for (std::size_t i = 0; i < size(); ++i)
    if (grid_.nodes[i] >= a && grid_.nodes[i] <= b && x_[i] < best.second)
      best = {grid_.nodes[i], x_[i]};
  if (samples > 1)
    for (std::size_t k = 0; k < samples; ++k)
      consider(a + (b - a) * static_cast<double>(k) / static_cast<double>(samples - 1));
  // Polish the sampled minimum inside the neighbouring sample cells.
  if (samples > 2) {
    const double cell = (b - a) / static_cast<double>(samples - 1);
    const double lo = std::max(a, best.first - cell), hi = std::min(b, best.first + cell);
    if (hi > lo) {
      const auto [t, v] = boost::math::tools::brent_find_minima(
          [this](double x) { return value(x); }, lo, hi, std::numeric_limits<double>::digits / 2);
      if (v < best.second) best = {t, v};
    }
  }
  return best;
}

}  // namespace ahwarp
