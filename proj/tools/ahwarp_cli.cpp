// Command-line front end: CSV dumps of the profile, geodesics and Jacobi fields, JSON for
// stable solutions, the root search and the full scan.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ahwarp/constants.hpp"
#include "ahwarp/errors.hpp"
#include "ahwarp/format.hpp"
#include "ahwarp/geodesics.hpp"
#include "ahwarp/jacobi.hpp"
#include "ahwarp/profile.hpp"
#include "ahwarp/report_json.hpp"
#include "ahwarp/search.hpp"
#include "ahwarp/stable.hpp"

using namespace ahwarp;

namespace {

constexpr int kUsageError = 2;
constexpr int kComputeError = 1;

struct Common {
  double s = 0.0;
  double r = kQuarterPi;
  double eps = 0.0;
  double tol = 1e-10;
  double tmax = 10.0;
  double step = 0.01;
  std::string kind = "parallel";
  std::string out;
};

double default_tol() {
  if (const char* env = std::getenv("AHWARP_TOL")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      throw ParameterError(std::string("AHWARP_TOL is not a number: ") + env);
    }
  }
  return 1e-10;
}

void check_tol(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-4)) throw ParameterError("--tol must lie in [1e-12, 1e-4]");
}

void check_grid(double tmax, double step) {
  if (!(tmax > 0.0 && step > 0.0)) throw ParameterError("grid bounds and step must be positive");
  if (tmax / step > 1e7) throw ParameterError("grid too fine");
}

// Writes to --out when given, otherwise to standard output.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::size_t grid_size(double tmax, double step) {
  return static_cast<std::size_t>(std::floor(tmax / step + 1e-9)) + 1;
}

int run_profile(const Common& c) {
  check_tol(c.tol);
  check_grid(c.tmax, c.step);
  const auto w = solve_warp({c.r, c.eps}, std::min(c.tol, 1e-12));
  Sink sink(c.out);
  CsvWriter csv(sink.stream(), {"rho", "A", "A_prime", "K_par", "K_perp"});
  for (std::size_t i = 1; i < grid_size(c.tmax, c.step); ++i) {
    const double rho = static_cast<double>(i) * c.step;
    csv.row({rho, w.value(rho), w.deriv(rho), k_parallel(w.params(), rho), k_perp(w, rho)});
  }
  return 0;
}

bool closed_forms_apply(const Common& c) {
  return c.eps == 0.0 && std::abs(c.r - kQuarterPi) <= 1e-6;
}

int run_geodesic(const Common& c) {
  check_tol(c.tol);
  check_grid(c.tmax, c.step);
  const auto rad = solve_radial({c.s, c.r, c.eps}, c.tmax, std::min(c.tol, 1e-12));
  const bool theta = closed_forms_apply(c);
  Sink sink(c.out);
  std::vector<std::string> header{"t", "rho", "rho_prime"};
  if (theta) header.push_back("theta");
  CsvWriter csv(sink.stream(), header);
  for (std::size_t i = 0; i < grid_size(c.tmax, c.step); ++i) {
    const double t = std::min(c.tmax, static_cast<double>(i) * c.step);
    const auto x = rad.state(t);
    std::vector<double> row{t, x.rho, x.drho};
    if (theta) row.push_back(closed_theta(c.s, t));
    csv.row(row);
  }
  return 0;
}

int run_jacobi(const Common& c) {
  check_tol(c.tol);
  check_grid(c.tmax, c.step);
  const auto kernel = make_kernel(kind_from_string(c.kind), {c.s, c.r, c.eps}, c.tmax,
                                  std::min(c.tol, 1e-12));
  const auto pair = fundamental_pair(kernel, c.tmax, std::min(c.tol, 1e-12));
  Sink sink(c.out);
  CsvWriter csv(sink.stream(), {"t", "U", "U_prime", "V", "V_prime", "kernel"});
  for (std::size_t i = 0; i < grid_size(c.tmax, c.step); ++i) {
    const double t = std::min(c.tmax, static_cast<double>(i) * c.step);
    csv.row({t, pair.U.value(t), pair.U.deriv(t), pair.V.value(t), pair.V.deriv(t),
             kernel.value(t)});
  }
  return 0;
}

int run_stable(const Common& c) {
  check_tol(c.tol);
  StableOptions opt;
  opt.accept = c.tol;
  const auto y = stable_solution(kind_from_string(c.kind), {c.s, c.r, c.eps}, opt);
  Sink sink(c.out);
  sink.stream() << stable_to_json(y);
  return 0;
}

int run_find_r(const Common& c, double halfwidth) {
  check_tol(c.tol);
  StableOptions opt;
  opt.accept = std::min(opt.accept, c.tol);
  const auto root = find_r_star(c.eps, halfwidth, c.tol, opt);
  nlohmann::json j = {{"eps", c.eps},
                      {"r_star", root.r_star},
                      {"residual", root.residual},
                      {"bracket",
                       {{"r_lo", root.bracket.r_lo},
                        {"r_hi", root.bracket.r_hi},
                        {"f_lo", root.bracket.f_lo},
                        {"f_hi", root.bracket.f_hi}}},
                      {"evaluations", root.evaluations}};
  Sink sink(c.out);
  sink.stream() << j.dump(2) << '\n';
  return root.residual < c.tol ? 0 : kComputeError;
}

int run_scan(const Common& c, ScanConfig cfg) {
  check_tol(c.tol);
  cfg.eps = c.eps;
  cfg.tol = c.tol;
  const auto rep = assemble_report(cfg);
  Sink sink(c.out);
  sink.stream() << report_to_json(rep);
  if (!rep.success()) std::cerr << "ahwarp scan: " << rep.overall << '\n';
  return rep.success() ? 0 : kComputeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warped-product metrics with boundary but no interior conjugate points"};
  app.require_subcommand(1);

  Common c;
  ScanConfig cfg;
  double halfwidth = 0.1;
  try {
    c.tol = default_tol();
  } catch (const ParameterError& ex) {
    std::cerr << "ahwarp: " << ex.what() << '\n';
    return kUsageError;
  }

  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("--r", c.r, "cap radius r")->capture_default_str();
    sub->add_option("--eps", c.eps, "transition width eps")->capture_default_str();
    sub->add_option("--tol", c.tol, "tolerance in [1e-12, 1e-4] (default from AHWARP_TOL)")
        ->capture_default_str();
    sub->add_option("-o,--out", c.out, "output file (default: standard output)");
  };
  auto add_s = [&](CLI::App* sub) {
    sub->add_option("--s", c.s, "closest-approach distance s")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub, const char* what) {
    sub->add_option("--tmax", c.tmax, std::string("upper end of the ") + what + " grid")
        ->capture_default_str();
    sub->add_option("--step", c.step, "grid step")->capture_default_str();
  };
  auto add_kind = [&](CLI::App* sub) {
    sub->add_option("--kind", c.kind, "parallel or perpendicular")
        ->check(CLI::IsMember({"parallel", "perpendicular", "par", "perp"}))
        ->capture_default_str();
  };

  auto* profile = app.add_subcommand("profile", "CSV: rho, A, A_prime, K_par, K_perp");
  add_profile(profile);
  profile->add_option("--rho-max", c.tmax, "upper end of the rho grid")->capture_default_str();
  profile->add_option("--step", c.step, "grid step")->capture_default_str();

  auto* geodesic = app.add_subcommand("geodesic", "CSV: t, rho, rho_prime[, theta]");
  add_s(geodesic);
  add_profile(geodesic);
  add_grid(geodesic, "t");

  auto* jacobi = app.add_subcommand("jacobi", "CSV: t, U, U_prime, V, V_prime, kernel");
  add_kind(jacobi);
  add_s(jacobi);
  add_profile(jacobi);
  add_grid(jacobi, "t");

  auto* stable = app.add_subcommand("stable", "JSON: decaying solution summary");
  add_kind(stable);
  add_s(stable);
  add_profile(stable);

  auto* find_r = app.add_subcommand("find-r", "JSON: root r_star of Y'(0) on the radial geodesic");
  find_r->add_option("--eps", c.eps, "transition width eps")->capture_default_str();
  find_r->add_option("--halfwidth", halfwidth, "bracket half-width around pi/4")
      ->capture_default_str();
  find_r->add_option("--tol", c.tol, "residual tolerance in [1e-12, 1e-4]")->capture_default_str();
  find_r->add_option("-o,--out", c.out, "output file (default: standard output)");

  auto* scan = app.add_subcommand("scan", "JSON: full verification report; exit 0 iff success");
  scan->add_option("--eps", c.eps, "transition width eps")->capture_default_str();
  scan->add_option("--halfwidth", cfg.bracket_halfwidth, "bracket half-width around pi/4")
      ->capture_default_str();
  scan->add_option("--sigma", cfg.sigma, "end of the small-s range")->capture_default_str();
  scan->add_option("--ds", cfg.ds, "s-grid step")->capture_default_str();
  scan->add_option("--T", cfg.T, "integration horizon for positivity checks")
      ->capture_default_str();
  scan->add_option("--tol", c.tol, "tolerance in [1e-12, 1e-4]")->capture_default_str();
  scan->add_option("--threads", cfg.threads, "worker threads (0: all cores)")
      ->capture_default_str();
  scan->add_option("-o,--out", c.out, "output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*profile) return run_profile(c);
    if (*geodesic) return run_geodesic(c);
    if (*jacobi) return run_jacobi(c);
    if (*stable) return run_stable(c);
    if (*find_r) return run_find_r(c, halfwidth);
    if (*scan) return run_scan(c, cfg);
  } catch (const ParameterError& ex) {
    std::cerr << "ahwarp: " << ex.what() << '\n';
    return kUsageError;
  } catch (const std::exception& ex) {
    std::cerr << "ahwarp: " << ex.what() << '\n';
    return kComputeError;
  }
  return kUsageError;
}
