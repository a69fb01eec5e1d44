#include "catch_amalgamated.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ahwarp/errors.hpp"
#include "ahwarp/jacobi.hpp"
#include "ahwarp/ode.hpp"
#include "ahwarp/trajectory.hpp"
#include "oracles.hpp"

using namespace ahwarp;
using ode::Side;
using ode::State;

namespace {

ode::Field<2> oscillator(double k) {
  ode::Field<2> f;
  f.rhs = [k](double, const State<2>& y, Side, State<2>& dy) {
    dy[0] = y[1];
    dy[1] = -k * y[0];
  };
  return f;
}

// A'' = -K A with K = 1 below rho = pi/4 and -1 above.
ode::Field<2> special_warp() {
  ode::Field<2> f;
  f.rhs = [](double, const State<2>& y, Side side, State<2>& dy) {
    dy[0] = y[1];
    dy[1] = (side == Side::below ? -1.0 : 1.0) * y[0];
  };
  f.switching = [](double rho, const State<2>&) { return rho - oracle::q; };
  return f;
}

double harmonic_error(double tol) {
  const auto sol = ode::integrate_ivp(oscillator(1.0), 0.0, {0.0, 1.0}, 10.0,
                                      ode::Options::with_tol(tol));
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.t.size(); ++i)
    worst = std::max(worst, std::abs(sol.y[i][0] - std::sin(sol.t[i])));
  return worst;
}

double decay_error(double tol) {
  const auto sol = ode::integrate_ivp(oscillator(-1.0), 0.0, {1.0, -1.0}, 10.0,
                                      ode::Options::with_tol(tol));
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.t.size(); ++i)
    worst = std::max(worst, std::abs(sol.y[i][0] - std::exp(-sol.t[i])));
  return worst;
}

}  // namespace

TEST_CASE("harmonic oscillator returns to zero at pi", "[ode]") {
  const double tol = 1e-10;
  const auto sol = ode::integrate_ivp(oscillator(1.0), 0.0, {0.0, 1.0}, std::numbers::pi,
                                      ode::Options::with_tol(tol));
  CHECK(sol.t.back() == std::numbers::pi);
  CHECK(std::abs(sol.y.back()[0]) < tol);
  CHECK(std::abs(sol.y.back()[1] + 1.0) < tol);
  CHECK(sol.events.empty());
}

TEST_CASE("weak solution across a curvature jump matches the exterior exponential", "[ode][events]") {
  const double tol = 1e-10;
  const auto sol = ode::integrate_ivp(special_warp(), 0.0, {0.0, 1.0}, 1.0,
                                      ode::Options::with_tol(tol));
  REQUIRE(sol.events.size() == 1);
  CHECK(std::abs(sol.events[0].t - oracle::q) < tol);
  CHECK(std::abs(sol.y.back()[0] - std::sqrt(2.0) / 2 * std::exp(1.0 - oracle::q)) < tol);

  // The event is a node and the one-sided second derivatives differ in sign there.
  std::size_t at = 0;
  for (std::size_t i = 0; i < sol.t.size(); ++i)
    if (sol.t[i] == sol.events[0].t) at = i;
  REQUIRE(at > 0);
  CHECK(sol.f_left[at][1] < 0.0);
  CHECK(sol.f_right[at][1] > 0.0);
  CHECK(sol.f_left[at][0] == sol.f_right[at][0]);
  CHECK(sol.sides[at - 1] == Side::below);
  CHECK(sol.sides[at] == Side::above);
}

TEST_CASE("no step straddles the switching surface", "[ode][events]") {
  const auto sol = ode::integrate_ivp(special_warp(), 0.0, {0.0, 1.0}, 3.0,
                                      ode::Options::with_tol(1e-8));
  for (std::size_t i = 0; i + 1 < sol.t.size(); ++i) {
    const bool before = sol.t[i] < sol.events[0].t && sol.t[i + 1] > sol.events[0].t;
    CHECK_FALSE(before);
  }
}

TEST_CASE("backward integration of the decay mode", "[ode][backward]") {
  const double tol = 1e-10;
  SECTION("seed at T = 10") {
    const double T = 10.0;
    const auto sol = ode::integrate_backward(oscillator(-1.0), T, {std::exp(-T), -std::exp(-T)},
                                             0.0, ode::Options::with_tol(tol));
    CHECK(sol.t.front() == 0.0);
    CHECK(sol.t.back() == T);
    CHECK(std::abs(sol.y.front()[0] - 1.0) < 10 * tol);
  }
  SECTION("unit seed at T = 20 rescaled") {
    const double T = 20.0;
    const auto sol = ode::integrate_backward(oscillator(-1.0), T, {1.0, -1.0}, 0.0,
                                             ode::Options::with_tol(tol));
    const auto y = Trajectory::from_solution(sol).scaled(std::exp(-T));
    for (double t : {0.0, 0.5, 3.0, 7.25, 19.0})
      CHECK(std::abs(y.value(t) - std::exp(-t)) <= tol * std::exp(-t) * 10);
  }
  SECTION("shifted cosine") {
    const auto sol = ode::integrate_backward(oscillator(1.0), std::numbers::pi / 2, {1.0, 0.0},
                                             0.0, ode::Options::with_tol(tol));
    CHECK(std::abs(sol.y.front()[0]) < tol);
  }
}

TEST_CASE("backward perpendicular Jacobi solution matches the closed-form stable combination",
          "[ode][backward][jacobi]") {
  const double s = 0.5, T = 30.0;
  const auto kernel = make_kernel(Kind::perpendicular, {s, oracle::q, 0.0}, T);
  const auto sol = ode::integrate_backward(kernel.field(), T, {1.0, -1.0}, 0.0,
                                           ode::Options::with_tol(1e-10));
  REQUIRE(sol.events.size() == 1);
  CHECK(std::abs(sol.events[0].t - oracle::ell(s)) < 1e-10);
  const double y0 = sol.y.front()[0] * std::exp(-T);
  CHECK(std::abs(y0 - oracle::Y_perp(s, 0.0)) < 1e-6);
  const auto y = Trajectory::from_solution(sol).scaled(std::exp(-T));
  for (double t : {0.2, 1.0, 4.0, 12.0})
    CHECK(std::abs(y.value(t) - oracle::Y_perp(s, t)) < 1e-6 * std::max(1e-6, oracle::Y_perp(s, t)));
}

TEST_CASE("error decreases monotonically as the tolerance tightens", "[ode][convergence]") {
  const double h6 = harmonic_error(1e-6), h8 = harmonic_error(1e-8), h10 = harmonic_error(1e-10);
  CHECK(h8 < h6);
  CHECK(h10 < h8);
  // Two decades of tolerance buy at least one decade of accuracy.
  CHECK(h8 < 0.1 * h6);
  CHECK(h10 < 0.1 * h8);
  const double e6 = decay_error(1e-6), e8 = decay_error(1e-8), e10 = decay_error(1e-10);
  CHECK(e8 < 0.1 * e6);
  CHECK(e10 < 0.1 * e8);
}

TEST_CASE("Wronskian of a trace-free linear system is conserved", "[ode][property]") {
  for (double tol : {1e-8, 1e-10}) {
    ode::Field<4> f;
    // x' = M(t) x with M = [[a, b], [c, -a]] for two columns stacked.
    f.rhs = [](double t, const State<4>& y, Side, State<4>& dy) {
      const double a = 0.3 * std::sin(t), b = 1.0, c = -1.0 - 0.5 * std::cos(2.0 * t);
      dy[0] = a * y[0] + b * y[1];
      dy[1] = c * y[0] - a * y[1];
      dy[2] = a * y[2] + b * y[3];
      dy[3] = c * y[2] - a * y[3];
    };
    const auto sol = ode::integrate_ivp(f, 0.0, {1.0, 0.0, 0.0, 1.0}, 20.0,
                                        ode::Options::with_tol(tol));
    double worst = 0.0;
    for (const auto& y : sol.y) worst = std::max(worst, std::abs(y[0] * y[3] - y[1] * y[2] - 1.0));
    CHECK(worst < 100 * tol);
  }
}

TEST_CASE("fixed-step mode takes exactly the requested steps", "[ode]") {
  ode::Options opt;
  opt.fixed_step = 0.01;
  const auto sol = ode::integrate_ivp(oscillator(1.0), 0.0, {0.0, 1.0}, 1.0, opt);
  CHECK(sol.t.size() == 101);
  CHECK(std::abs(sol.y.back()[0] - std::sin(1.0)) < 1e-10);
}

TEST_CASE("state_at re-steps to the integrator's accuracy", "[ode]") {
  const auto f = special_warp();
  const auto sol = ode::integrate_ivp(f, 0.0, {0.0, 1.0}, 3.0, ode::Options::with_tol(1e-12));
  for (double rho : {0.1, 0.5, 0.78, 0.9, 1.7, 2.99}) {
    const double exact = rho <= oracle::q ? std::sin(rho)
                                          : std::sqrt(2.0) / 2 * std::exp(rho - oracle::q);
    CHECK(std::abs(ode::state_at(f, sol, rho)[0] - exact) < 1e-11 * std::max(1.0, exact));
  }
  CHECK_THROWS_AS(ode::state_at(f, sol, 3.5), ParameterError);
}

TEST_CASE("quintic Hermite trajectory reproduces smooth solutions", "[ode][trajectory]") {
  const auto sol = ode::integrate_ivp(oscillator(1.0), 0.0, {0.0, 1.0}, 6.0,
                                      ode::Options::with_tol(1e-12));
  const auto tr = Trajectory::from_solution(sol);
  CHECK(tr.size() == sol.t.size());
  for (double t = 0.0; t <= 6.0; t += 0.137) {
    CHECK(std::abs(tr.value(t) - std::sin(t)) < 1e-9);
    CHECK(std::abs(tr.deriv(t) - std::cos(t)) < 1e-8);
  }
  const auto [tmin, vmin] = tr.minimum(0.0, 6.0);
  CHECK(std::abs(vmin + 1.0) < 1e-8);
  CHECK(std::abs(tmin - 1.5 * std::numbers::pi) < 1e-3);
}

TEST_CASE("integrator failures are reported", "[ode][errors]") {
  SECTION("finite-time blow-up underflows the step size") {
    ode::Field<1> f;
    f.rhs = [](double, const State<1>& y, Side, State<1>& dy) { dy[0] = y[0] * y[0]; };
    CHECK_THROWS_AS(ode::integrate_ivp(f, 0.0, {1.0}, 2.0, ode::Options::with_tol(1e-8)),
                    IntegrationError);
  }
  SECTION("a switching function that is undefined inside the step") {
    ode::Field<1> f;
    f.rhs = [](double, const State<1>&, Side, State<1>& dy) { dy[0] = 1.0; };
    f.switching = [](double t, const State<1>&) {
      if (t > 0.5 && t < 1.5) return std::numeric_limits<double>::quiet_NaN();
      return 1.0 - t;
    };
    ode::Options opt;
    opt.fixed_step = 2.0;
    CHECK_THROWS_AS(ode::integrate_ivp(f, 0.0, {0.0}, 2.0, opt), IntegrationError);
  }
  SECTION("empty interval") {
    CHECK_THROWS_AS(ode::integrate_ivp(oscillator(1.0), 1.0, {0.0, 1.0}, 1.0, ode::Options{}),
                    ParameterError);
    CHECK_THROWS_AS(ode::integrate_backward(oscillator(1.0), 0.0, {0.0, 1.0}, 1.0, ode::Options{}),
                    ParameterError);
  }
}
