#pragma once

#include <string>
#include <vector>

#include "ahwarp/constants.hpp"
#include "ahwarp/stable.hpp"

namespace ahwarp {

struct Bracket {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

struct RootResult {
  double r_star = 0.0;
  /// |Y'_{0, r_star, eps}(0)|.
  double residual = 0.0;
  Bracket bracket;
  int evaluations = 0;
};

/// Y'(0) of the parallel decaying solution on the radial geodesic of (r, eps).
double radial_root_function(double r, double eps, const StableOptions& opt = {});

/// Root of r -> Y'_{0,r,eps}(0) in [pi/4 - halfwidth, pi/4 + halfwidth].
/// Throws BracketError when the endpoint values share a sign.
RootResult find_r_star(double eps, double halfwidth = 0.1, double tol = 1e-10,
                       const StableOptions& opt = {});

struct SmallSEntry {
  double s = 0.0;
  double w_parallel = 0.0;
  double w_perp = 0.0;
  bool pass = false;

  friend bool operator==(const SmallSEntry&, const SmallSEntry&) = default;
};

struct SmallSResult {
  std::vector<SmallSEntry> entries;
  /// One-sided second s-derivatives of W'(0) at s = 0.
  double d2_parallel = 0.0;
  double d2_perp = 0.0;
  bool pass = false;
};

/// Certificates W'(0) <= tol_sign for s = 0, ds, ..., sigma and both kinds, plus the
/// concavity signature d2 < 0 at s = 0 (stencil step ds, from the same samples).
SmallSResult verify_small_s(double r, double eps, double sigma = 0.3, double ds = 0.01,
                            const StableOptions& opt = {}, unsigned threads = 0);

struct MidSEntry {
  double s = 0.0;
  double min_parallel = 0.0;
  double min_perp = 0.0;
  double t_min_parallel = 0.0;
  double t_min_perp = 0.0;
  double slope_parallel_T = 0.0;
  double slope_perp_T = 0.0;
  bool pass = false;

  friend bool operator==(const MidSEntry&, const MidSEntry&) = default;
};

struct LargeSResult {
  double rho0 = 0.0;
  bool curvature_negativity_certified = false;
  std::vector<MidSEntry> entries;
  bool pass = false;
};

/// Sign scan of K_par and K_perp on (rho0, rho0 + span] and just below rho0.
bool confirm_negative_curvature(const WarpFunction& w, double rho0, double span = 30.0);

/// rho0 from the curvature sign, then positivity of U_par and U_perp on [0, T] with
/// U'(T) > 0 for s = sigma, sigma + ds, ... up to s_cap (s_cap <= 0 means rho0).
LargeSResult verify_large_s(double r, double eps, double sigma = 0.3, double s_cap = 0.0,
                            double ds = 0.01, double T = 20.0, double tol = 1e-12,
                            unsigned threads = 0);

struct ScanConfig {
  double eps = 0.0;
  double bracket_halfwidth = 0.1;
  double sigma = 0.3;
  double ds = 0.01;
  double T = 20.0;
  double tol = 1e-10;
  double witness_horizon = 30.0;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

struct Witness {
  double Y0 = 0.0;
  double W_prime_0 = 0.0;
  double Y_at_horizon = 0.0;
  double Y_at_minus_horizon = 0.0;
  double min_Y = 0.0;
  bool pass = false;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct NonTrapping {
  double a = 0.0;
  double worst_margin = 0.0;
  bool pass = false;

  friend bool operator==(const NonTrapping&, const NonTrapping&) = default;
};

struct ScanReport {
  ScanConfig config;
  double eps = 0.0;
  double r_star = 0.0;
  double root_residual = 0.0;
  Bracket bracket;
  std::vector<SmallSEntry> small_s;
  double d2_parallel = 0.0;
  double d2_perp = 0.0;
  std::vector<MidSEntry> mid_s;
  double large_s_threshold = 0.0;
  bool curvature_negativity_certified = false;
  Witness witness;
  NonTrapping non_trapping;
  /// "boundary-CP-and-no-interior-CP" or "failed: <reason>".
  std::string overall;
  std::string method = "certification by sampling on finite grids, not a computer-assisted proof";

  bool success() const { return overall == kSuccess; }
  static constexpr const char* kSuccess = "boundary-CP-and-no-interior-CP";
};

bool operator==(const Bracket& a, const Bracket& b);
bool operator==(const ScanConfig& a, const ScanConfig& b);
bool operator==(const ScanReport& a, const ScanReport& b);

/// Runs the root search, both s-ranges, the boundary witness and the non-trapping check.
/// Stage failures are recorded in `overall`; nothing is thrown for them.
ScanReport assemble_report(const ScanConfig& cfg);

}  // namespace ahwarp
