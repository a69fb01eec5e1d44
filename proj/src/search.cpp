#include "ahwarp/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include <boost/math/tools/toms748_solve.hpp>

#include "ahwarp/errors.hpp"
#include "ahwarp/format.hpp"

namespace ahwarp {

namespace {

// Runs fn(0..n-1) on a small thread pool; results are written by index so the
// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> s_grid(double from, double to, double ds) {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((to - from) / ds + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * ds);
  if (to - out.back() > 1e-9 * std::max(1.0, to)) out.push_back(to);
  return out;
}

}  // namespace

double radial_root_function(double r, double eps, const StableOptions& opt) {
  return stable_solution(Kind::parallel, {0.0, r, eps}, opt).Y_prime_0;
}

RootResult find_r_star(double eps, double halfwidth, double tol, const StableOptions& opt) {
  if (!(eps >= 0.0)) throw ParameterError("find_r_star: eps must be nonnegative");
  if (!(halfwidth > 0.0 && halfwidth <= kRadiusHalfWidth))
    throw ParameterError("find_r_star: bracket halfwidth must lie in (0, " +
                         format_double(kRadiusHalfWidth) + "]");
  RootResult out;
  std::vector<std::pair<double, double>> seen;
  auto f = [&](double r) {
    const double v = radial_root_function(r, eps, opt);
    seen.emplace_back(r, v);
    return v;
  };
  out.bracket.r_lo = kQuarterPi - halfwidth;
  out.bracket.r_hi = kQuarterPi + halfwidth;
  out.bracket.f_lo = f(out.bracket.r_lo);
  out.bracket.f_hi = f(out.bracket.r_hi);
  if (!(out.bracket.f_lo * out.bracket.f_hi < 0.0))
    throw BracketError("find_r_star: no sign change on [" + format_double(out.bracket.r_lo) +
                       ", " + format_double(out.bracket.r_hi) + "] at eps=" + format_double(eps) +
                       " (f_lo=" + format_double(out.bracket.f_lo) +
                       ", f_hi=" + format_double(out.bracket.f_hi) + ")");
  std::uintmax_t iters = 100;
  bool done = false;
  auto stop = [&](double a, double b) {
    return done || std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon();
  };
  auto g = [&](double r) {
    const double v = f(r);
    if (std::abs(v) < 0.01 * tol) done = true;
    return v;
  };
  boost::math::tools::toms748_solve(g, out.bracket.r_lo, out.bracket.r_hi, out.bracket.f_lo,
                                    out.bracket.f_hi, stop, iters);
  const auto best = std::min_element(seen.begin(), seen.end(), [](const auto& a, const auto& b) {
    return std::abs(a.second) < std::abs(b.second);
  });
  out.r_star = best->first;
  out.residual = std::abs(best->second);
  out.evaluations = static_cast<int>(seen.size());
  return out;
}

SmallSResult verify_small_s(double r, double eps, double sigma, double ds,
                            const StableOptions& opt, unsigned threads) {
  if (!(sigma > 0.0 && ds > 0.0 && sigma >= 3.0 * ds))
    throw ParameterError("verify_small_s: needs sigma >= 3 ds > 0");
  const auto grid = s_grid(0.0, sigma, ds);
  SmallSResult out;
  out.entries.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const double s = grid[i];
    SmallSEntry e;
    e.s = s;
    try {
      e.w_parallel = certificate(Kind::parallel, {s, r, eps}, opt);
      e.w_perp = certificate(Kind::perpendicular, {s, r, eps}, opt);
    } catch (const std::exception& ex) {
      throw CertificateError("verify_small_s at s=" + format_double(s) + ": " + ex.what());
    }
    e.pass = e.w_parallel <= kSignTolerance && e.w_perp <= kSignTolerance;
    out.entries[i] = e;
  });
  const auto& en = out.entries;
  const double h2 = ds * ds;
  out.d2_parallel =
      (2.0 * en[0].w_parallel - 5.0 * en[1].w_parallel + 4.0 * en[2].w_parallel - en[3].w_parallel) / h2;
  out.d2_perp = (2.0 * en[0].w_perp - 5.0 * en[1].w_perp + 4.0 * en[2].w_perp - en[3].w_perp) / h2;
  out.pass = out.d2_parallel < 0.0 && out.d2_perp < 0.0 &&
             std::all_of(en.begin(), en.end(), [](const auto& e) { return e.pass; });
  return out;
}

bool confirm_negative_curvature(const WarpFunction& w, double rho0, double span) {
  constexpr int n = 3000;
  for (int k = 1; k <= n; ++k) {
    const double u = static_cast<double>(k) / n;
    const double rho = rho0 + span * u * u;
    if (!(k_parallel(w.params(), rho) < 0.0 && k_perp(w, rho) < 0.0)) return false;
  }
  // The threshold is not overstated: just below it one curvature is nonnegative.
  const double below = rho0 - 1e-6 * std::max(1.0, rho0);
  return std::max(k_parallel(w.params(), below), k_perp(w, below)) >= 0.0;
}

LargeSResult verify_large_s(double r, double eps, double sigma, double s_cap, double ds, double T,
                            double tol, unsigned threads) {
  if (!(sigma > 0.0 && ds > 0.0 && T > 0.0))
    throw ParameterError("verify_large_s: needs sigma, ds, T > 0");
  auto warp = std::make_shared<const WarpFunction>(solve_warp({r, eps}, std::min(tol, 1e-12)));
  LargeSResult out;
  out.rho0 = negative_curvature_radius(*warp);
  out.curvature_negativity_certified = confirm_negative_curvature(*warp, out.rho0);
  if (!(s_cap > 0.0)) s_cap = out.rho0;
  if (s_cap < sigma) s_cap = sigma;
  const auto grid = s_grid(sigma, s_cap, ds);
  out.entries.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    MidSEntry e;
    e.s = grid[i];
    auto radial = std::make_shared<const RadialSolution>(solve_radial({e.s, r, eps}, T, tol, warp));
    const auto par = fundamental_pair(JacobiKernel(Kind::parallel, radial), T, tol);
    const auto perp = fundamental_pair(JacobiKernel(Kind::perpendicular, radial), T, tol);
    std::tie(e.t_min_parallel, e.min_parallel) = par.U.minimum(0.0, T);
    std::tie(e.t_min_perp, e.min_perp) = perp.U.minimum(0.0, T);
    e.slope_parallel_T = par.U.derivs().back();
    e.slope_perp_T = perp.U.derivs().back();
    e.pass = e.min_parallel > 0.0 && e.min_perp > 0.0 && e.slope_parallel_T > 0.0 &&
             e.slope_perp_T > 0.0;
    out.entries[i] = e;
  });
  out.pass = out.curvature_negativity_certified &&
             std::all_of(out.entries.begin(), out.entries.end(), [](const auto& e) { return e.pass; });
  return out;
}

bool operator==(const Bracket& a, const Bracket& b) {
  return a.r_lo == b.r_lo && a.r_hi == b.r_hi && a.f_lo == b.f_lo && a.f_hi == b.f_hi;
}

bool operator==(const ScanConfig& a, const ScanConfig& b) {
  return a.eps == b.eps && a.bracket_halfwidth == b.bracket_halfwidth && a.sigma == b.sigma &&
         a.ds == b.ds && a.T == b.T && a.tol == b.tol && a.witness_horizon == b.witness_horizon &&
         a.threads == b.threads;
}

bool operator==(const ScanReport& a, const ScanReport& b) {
  return a.config == b.config && a.eps == b.eps && a.r_star == b.r_star &&
         a.root_residual == b.root_residual && a.bracket == b.bracket && a.small_s == b.small_s &&
         a.d2_parallel == b.d2_parallel && a.d2_perp == b.d2_perp && a.mid_s == b.mid_s &&
         a.large_s_threshold == b.large_s_threshold &&
         a.curvature_negativity_certified == b.curvature_negativity_certified &&
         a.witness == b.witness && a.non_trapping == b.non_trapping && a.overall == b.overall &&
         a.method == b.method;
}

ScanReport assemble_report(const ScanConfig& cfg) {
  ScanReport rep;
  rep.config = cfg;
  rep.eps = cfg.eps;
  std::string failure;
  auto fail = [&failure](const std::string& why) {
    if (failure.empty()) failure = why;
  };
  StableOptions opt;
  opt.accept = std::min(opt.accept, cfg.tol);

  try {
    const auto root = find_r_star(cfg.eps, cfg.bracket_halfwidth, cfg.tol, opt);
    rep.r_star = root.r_star;
    rep.root_residual = root.residual;
    rep.bracket = root.bracket;
  } catch (const BracketError& ex) {
    rep.overall = std::string("failed: bracket: ") + ex.what();
    return rep;
  } catch (const std::exception& ex) {
    rep.overall = std::string("failed: root search: ") + ex.what();
    return rep;
  }
  if (!(rep.root_residual < cfg.tol)) fail("root residual " + format_double(rep.root_residual));

  try {
    const auto small = verify_small_s(rep.r_star, cfg.eps, cfg.sigma, cfg.ds, opt, cfg.threads);
    rep.small_s = small.entries;
    rep.d2_parallel = small.d2_parallel;
    rep.d2_perp = small.d2_perp;
    if (!small.pass) fail("small-s certificates");
  } catch (const std::exception& ex) {
    fail(std::string("small-s: ") + ex.what());
  }

  try {
    const auto large = verify_large_s(rep.r_star, cfg.eps, cfg.sigma, 0.0, cfg.ds, cfg.T,
                                      std::min(cfg.tol, 1e-12), cfg.threads);
    rep.mid_s = large.entries;
    rep.large_s_threshold = large.rho0;
    rep.curvature_negativity_certified = large.curvature_negativity_certified;
    if (!large.curvature_negativity_certified) fail("curvature negativity not confirmed");
    if (!large.pass) fail("mid-s positivity");
  } catch (const std::exception& ex) {
    fail(std::string("large-s: ") + ex.what());
  }

  try {
    const auto y = stable_solution(Kind::parallel, {0.0, rep.r_star, cfg.eps}, opt);
    const double H = cfg.witness_horizon;
    if (H > y.seed_horizon) throw CertificateError("witness horizon beyond the seed horizon");
    auto& w = rep.witness;
    w.Y0 = y.Y0;
    w.W_prime_0 = y.W_prime_0;
    w.Y_at_horizon = y.Y.value(H);
    w.Y_at_minus_horizon = y.Y.value(std::abs(-H));  // even extension Y(|t|)
    w.min_Y = y.Y.minimum(0.0, H).second;
    const double bound = 2.0 * std::exp(-H);
    w.pass = std::abs(y.Y_prime_0) < cfg.tol && w.min_Y > 0.0 &&
             std::abs(w.Y_at_horizon) < bound && std::abs(w.Y_at_minus_horizon) < bound;
    if (!w.pass) fail("boundary conjugate witness");
  } catch (const std::exception& ex) {
    fail(std::string("witness: ") + ex.what());
  }

  try {
    auto warp = std::make_shared<const WarpFunction>(solve_warp({rep.r_star, cfg.eps}));
    auto& nt = rep.non_trapping;
    nt.a = nontrapping_rate(*warp);
    nt.worst_margin = std::numeric_limits<double>::infinity();
    for (double s : {0.0, 0.1, 0.3, 0.6, 1.0, 2.0}) {
      const auto rad = solve_radial({s, rep.r_star, cfg.eps}, cfg.T, 1e-12, warp);
      for (int k = 0; k <= 400; ++k) {
        const double t = cfg.T * k / 400.0;
        nt.worst_margin =
            std::min(nt.worst_margin, rad.rho(t) - comparison_lower_bound(nt.a, s, 0.0, t));
      }
    }
    nt.pass = nt.worst_margin >= -cfg.tol;
    if (!nt.pass) fail("non-trapping bound");
  } catch (const std::exception& ex) {
    fail(std::string("non-trapping: ") + ex.what());
  }

  rep.overall = failure.empty() ? ScanReport::kSuccess : "failed: " + failure;
  return rep;
}

}  // namespace ahwarp
