#include "catch_amalgamated.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "ahwarp/constants.hpp"
#include "ahwarp/errors.hpp"
#include "ahwarp/format.hpp"
#include "ahwarp/report_json.hpp"
#include "ahwarp/search.hpp"
#include "ahwarp/stable.hpp"

using namespace ahwarp;

namespace {

ScanReport sample_report() {
  ScanReport rep;
  rep.config.eps = 0.05;
  rep.config.threads = 3;
  rep.eps = 0.05;
  rep.r_star = 0.7712345678901234;
  rep.root_residual = 3.1e-13;
  rep.bracket = {0.685, 0.885, -0.0123, 0.0456};
  rep.small_s = {{0.0, -1e-14, 2e-15, true}, {0.01, -3.3e-5, -1.7e-5, true}};
  rep.d2_parallel = -0.98;
  rep.d2_perp = -0.331;
  rep.mid_s = {{0.3, 0.91, 0.88, 0.0, 0.1, 1e7, 2e6, true}};
  rep.large_s_threshold = 1.16;
  rep.curvature_negativity_certified = true;
  rep.witness = {0.6, 1e-12, 9e-14, 9e-14, 9e-14, true};
  rep.non_trapping = {0.95, 1e-3, true};
  rep.overall = ScanReport::kSuccess;
  return rep;
}

}  // namespace

TEST_CASE("shortest round-trip float formatting", "[report]") {
  for (double x : {0.0, 1.0, -2.5, 0.1, kQuarterPi, 1e-300, 6.02214076e23,
                   std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 2.0)}) {
    const auto text = format_double(x);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == x);
    CHECK(text.size() <= 24);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("CSV writer", "[report]") {
  std::ostringstream out;
  CsvWriter csv(out, {"t", "x"});
  csv.row({0.5, -1.0});
  CHECK(out.str() == "t,x\n0.5,-1\n");
  CHECK_THROWS(csv.row({1.0}));
}

TEST_CASE("JSON report round-trips with field equality", "[report][property]") {
  const auto rep = sample_report();
  const auto text = report_to_json(rep);
  const auto back = report_from_json(text);
  CHECK(back == rep);
  CHECK(report_to_json(back) == text);

  auto failed = rep;
  failed.overall = "failed: bracket: no sign change";
  failed.small_s.clear();
  CHECK(report_from_json(report_to_json(failed)) == failed);
}

TEST_CASE("malformed JSON is rejected", "[report][errors]") {
  CHECK_THROWS_AS(report_from_json("{"), ParameterError);
  CHECK_THROWS_AS(report_from_json("{\"eps\": 0.1}"), ParameterError);
  CHECK_THROWS_AS(report_from_json("[]"), ParameterError);
}

TEST_CASE("computed reports are deterministic", "[report][property]") {
  ScanConfig cfg;
  cfg.eps = 0.3;  // fails at the bracket stage, which keeps the test fast
  const auto a = report_to_json(assemble_report(cfg));
  const auto b = report_to_json(assemble_report(cfg));
  CHECK(a == b);
  CHECK(report_from_json(a) == assemble_report(cfg));
}

TEST_CASE("stable solution JSON", "[report]") {
  const auto y = stable_solution(Kind::parallel, {0.0, 0.7, 0.0});
  const auto text = stable_to_json(y);
  for (const char* key : {"\"kind\"", "\"s\"", "\"r\"", "\"eps\"", "\"Y0\"", "\"W_prime_0\"",
                          "\"seed_horizon\"", "\"seed_residual\""})
    CHECK(text.find(key) != std::string::npos);
  CHECK(text.find("\"parallel\"") != std::string::npos);
}
