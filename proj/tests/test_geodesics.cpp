#include "catch_amalgamated.hpp"

#include <cmath>
#include <memory>

#include "ahwarp/constants.hpp"
#include "ahwarp/errors.hpp"
#include "ahwarp/geodesics.hpp"
#include "ahwarp/jacobi.hpp"
#include "ahwarp/ode.hpp"
#include "oracles.hpp"

using namespace ahwarp;

TEST_CASE("entry time and exit slope", "[geodesics]") {
  CHECK(entry_time(0.0, kQuarterPi) == Catch::Approx(kQuarterPi).epsilon(1e-15));
  CHECK(entry_time(kQuarterPi - 1e-6, kQuarterPi) < 2e-3);
  CHECK(std::abs(entry_time(0.3, kQuarterPi) - std::acos(std::cos(oracle::q) / std::cos(0.3))) < 1e-15);
  CHECK_THROWS_AS(entry_time(0.8, 0.8), ParameterError);
  CHECK_THROWS_AS(entry_time(-0.1, 0.8), ParameterError);

  CHECK(radial_exit_slope(0.0, kQuarterPi) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(radial_exit_slope(0.3, kQuarterPi) - std::sqrt(std::cos(0.6))) < 1e-15);
  const double expect =
      std::sqrt(std::cos(0.5) * std::cos(0.5) - std::cos(0.8) * std::cos(0.8)) / std::sin(0.8);
  CHECK(std::abs(radial_exit_slope(0.5, 0.8) - expect) < 1e-15);
  CHECK_THROWS_AS(radial_exit_slope(0.9, 0.8), ParameterError);
}

TEST_CASE("integrated exit slope and entry event", "[geodesics][events]") {
  for (double r : {0.7, kQuarterPi, 0.8, 0.9})
    for (double s : {0.1, 0.3, 0.5}) {
      if (s >= r) continue;
      const auto rad = solve_radial({s, r, 0.0}, 10.0, 1e-12);
      REQUIRE(rad.entry_time().has_value());
      CHECK(std::abs(*rad.entry_time() - entry_time(s, r)) < 1e-10);
      CHECK(std::abs(rad.rho_prime(*rad.entry_time()) - radial_exit_slope(s, r)) < 1e-10);
      CHECK(rad.trajectory().events().size() == 1);
    }
  const auto far = solve_radial({1.0, kQuarterPi, 0.0}, 10.0);
  CHECK_FALSE(far.entry_time().has_value());
}

TEST_CASE("closed-form radial coordinate", "[geodesics]") {
  CHECK(closed_rho(0.0, 0.5) == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(closed_rho(0.2, entry_time(0.2, kQuarterPi)) - kQuarterPi) < 1e-14);
  CHECK(std::abs(closed_rho(kQuarterPi, 2.0) - (kQuarterPi + std::log(std::cosh(2.0)))) < 1e-14);
  for (double s : {0.0, 0.1, 0.3, 0.6, 0.78, 1.0, 2.0})
    for (double t = -12.0; t <= 12.0; t += 0.37) {
      CHECK(std::abs(closed_rho(s, t) - oracle::rho(s, t)) < 1e-12 * std::max(1.0, std::abs(t)));
      CHECK(closed_rho(s, t) == closed_rho(s, -t));
    }
}

TEST_CASE("closed-form angular coordinate", "[geodesics]") {
  for (double s : {0.1, 0.4, kQuarterPi, 1.5}) CHECK(closed_theta(s, 0.0) == 0.0);
  CHECK(std::abs(closed_theta(kQuarterPi, 40.0) - std::sqrt(2.0)) < 1e-14);
  const double l = entry_time(0.2, kQuarterPi);
  // Interior branch: great circle at distance s, tan(theta) = tan(t) / sin(s).
  const double inside = std::atan(std::tan(l) / std::sin(0.2));
  // Exterior branch at the junction.
  const double outside = oracle::Theta(l, 0.2);
  CHECK(std::abs(inside - outside) < 1e-12);
  CHECK(std::abs(closed_theta(0.2, l - 1e-13) - inside) < 1e-12);
  CHECK(std::abs(closed_theta(0.2, l + 1e-13) - outside) < 1e-12);
  CHECK(closed_theta(0.2, -1.0) == -closed_theta(0.2, 1.0));
  double prev = 0.0;
  for (double t = 0.05; t < 10.0; t += 0.05) {
    CHECK(closed_theta(0.2, t) > prev);
    prev = closed_theta(0.2, t);
  }
}

TEST_CASE("comparison lower bound", "[geodesics]") {
  CHECK(comparison_lower_bound(0.7, 0.2, 1.0, 3.0) == Catch::Approx(3.2).epsilon(1e-14));
  CHECK(comparison_lower_bound(1.0, 0.4, 0.0, 2.0) ==
        Catch::Approx(0.4 + std::log(std::cosh(2.0))).epsilon(1e-14));
  const double closed = comparison_lower_bound(0.5, 0.0, 0.0, 2.0);
  CHECK(std::abs(closed - 2.0 * std::log(std::cosh(1.0))) < 1e-14);
  // Numerical oracle: x'' = a (1 - x'^2), x(0) = 0, x'(0) = 0.
  ode::Field<2> f;
  f.rhs = [](double, const ode::State<2>& y, ode::Side, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = 0.5 * (1.0 - y[1] * y[1]);
  };
  const auto sol = ode::integrate_ivp(f, 0.0, {0.0, 0.0}, 2.0, ode::Options::with_tol(1e-12));
  CHECK(std::abs(sol.y.back()[0] - closed) < 1e-10);
  CHECK_THROWS_AS(comparison_lower_bound(0.0, 0.0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(comparison_lower_bound(1.0, 0.0, 1.5, 1.0), ParameterError);
}

TEST_CASE("numerical geodesics match the closed forms", "[geodesics][oracle]") {
  const double tol = 1e-10;
  for (double s : {0.0, 0.1, 0.3, 0.6, 0.78, 1.0}) {
    const auto rad = solve_radial({s, kQuarterPi, 0.0}, 12.0, tol);
    double worst = 0.0;
    for (int i = 0; i <= 1200; ++i) {
      const double t = i * 0.01;
      worst = std::max(worst, std::abs(rad.rho(t) - oracle::rho(s, t)));
    }
    INFO("s = " << s);
    CHECK(worst < 1e-8);
  }
  const auto a = solve_radial({0.3, kQuarterPi, 0.0}, 12.0, tol);
  CHECK(std::abs(a.rho(0.4) - std::acos(std::cos(0.3) * std::cos(0.4))) < tol);
  CHECK(std::abs(a.rho(5.0) - (oracle::q + std::log(oracle::F(5.0, 0.3)))) < 10 * tol);
  const auto b = solve_radial({1.0, kQuarterPi, 0.0}, 12.0, tol);
  CHECK(std::abs(b.rho(3.0) - (1.0 + std::log(std::cosh(3.0)))) < 10 * tol);
}

TEST_CASE("radial solution structural invariants", "[geodesics][property]") {
  for (double eps : {0.0, 0.05, 0.1})
    for (double s : {0.0, 0.2, 0.7, 1.2}) {
      const auto rad = solve_radial({s, kQuarterPi, eps}, 20.0, 1e-10);
      CHECK(rad.rho(0.0) == s);
      CHECK(rad.rho_prime(0.0) == (s == 0.0 ? 1.0 : 0.0));
      const double a = nontrapping_rate(rad.warp());
      for (int i = 1; i <= 400; ++i) {
        const double t = i * 0.05;
        const auto st = rad.state(t);
        REQUIRE(st.drho >= 0.0);
        REQUIRE(st.drho <= 1.0 + 1e-12);
        REQUIRE(st.rho >= comparison_lower_bound(a, s, 0.0, t) - 1e-10);
        if (s > 0.0) REQUIRE(st.dwarp / st.warp * (1 - st.drho * st.drho) > 0.0);
      }
      if (s == 0.0) CHECK(rad.exact_line());
    }
}

TEST_CASE("entry events across the parameter grid", "[geodesics][events]") {
  for (double r : {kQuarterPi - 0.15, kQuarterPi, kQuarterPi + 0.15})
    for (double eps : {0.0, 0.05})
      for (double s : {0.05, 0.3, 0.6}) {
        if (s >= r) continue;
        const auto rad = solve_radial({s, r, eps}, 10.0, 1e-11);
        REQUIRE(rad.entry_time());
        // The cap is exactly round, so the entry time does not depend on eps.
        CHECK(std::abs(*rad.entry_time() - entry_time(s, r)) < 1e-11 * 10);
      }
}

TEST_CASE("geodesics converge as the width shrinks", "[geodesics][property]") {
  for (double s : {0.1, 0.5, 1.0}) {
    const auto base = solve_radial({s, kQuarterPi, 0.0}, 12.0, 1e-11);
    double prev = 1e300;
    for (double eps : {0.1, 0.05, 0.01}) {
      const auto rad = solve_radial({s, kQuarterPi, eps}, 12.0, 1e-11);
      double dist = 0.0;
      for (int i = 0; i <= 1200; ++i) {
        const double t = i * 0.01;
        dist = std::max(dist, std::abs(rad.rho(t) - base.rho(t)));
      }
      CHECK(dist < prev);
      prev = dist;
    }
  }
}

TEST_CASE("variation in s is a multiple of the parallel Jacobi field", "[geodesics][property]") {
  // A(rho) d rho / ds = sin(s) U_parallel, by central differences with step 1e-4.
  const double h = 1e-4;
  for (double eps : {0.0, 0.05})
    for (double s : {0.1, 0.3}) {
      const auto plus = solve_radial({s + h, kQuarterPi, eps}, 8.0, 1e-12);
      const auto minus = solve_radial({s - h, kQuarterPi, eps}, 8.0, 1e-12);
      const auto mid = solve_radial({s, kQuarterPi, eps}, 8.0, 1e-12);
      const auto pair = fundamental_pair(
          JacobiKernel(Kind::parallel, std::make_shared<RadialSolution>(mid)), 8.0, 1e-12);
      for (int i = 0; i <= 80; ++i) {
        const double t = i * 0.1;
        const double drho = (plus.rho(t) - minus.rho(t)) / (2 * h);
        const double lhs = mid.warp().value(mid.rho(t)) * drho;
        INFO("eps " << eps << " s " << s << " t " << t);
        CHECK(std::abs(lhs - std::sin(s) * pair.U.value(t)) < 1e-5);
      }
    }
}

TEST_CASE("geodesic parameter errors", "[geodesics][errors]") {
  CHECK_THROWS_AS(solve_radial({-0.1, kQuarterPi, 0.0}), ParameterError);
  CHECK_THROWS_AS(solve_radial({0.1, kQuarterPi, 0.0}, 0.0), ParameterError);
  CHECK_THROWS_AS(solve_radial({0.1, 1.5, 0.2}), ParameterError);
  const auto rad = solve_radial({0.1, kQuarterPi, 0.0}, 5.0);
  CHECK_THROWS_AS(rad.state(6.0), ParameterError);
}
