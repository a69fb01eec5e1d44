#include "ahwarp/report_json.hpp"

#include "json.hpp"

#include "ahwarp/errors.hpp"

namespace ahwarp {

using nlohmann::json;

void to_json(json& j, const Bracket& b) {
  j = {{"r_lo", b.r_lo}, {"r_hi", b.r_hi}, {"f_lo", b.f_lo}, {"f_hi", b.f_hi}};
}
void from_json(const json& j, Bracket& b) {
  j.at("r_lo").get_to(b.r_lo);
  j.at("r_hi").get_to(b.r_hi);
  j.at("f_lo").get_to(b.f_lo);
  j.at("f_hi").get_to(b.f_hi);
}

void to_json(json& j, const ScanConfig& c) {
  j = {{"eps", c.eps}, {"bracket_halfwidth", c.bracket_halfwidth}, {"sigma", c.sigma},
       {"ds", c.ds},   {"T", c.T},                               {"tol", c.tol},
       {"witness_horizon", c.witness_horizon}, {"threads", c.threads}};
}
void from_json(const json& j, ScanConfig& c) {
  j.at("eps").get_to(c.eps);
  j.at("bracket_halfwidth").get_to(c.bracket_halfwidth);
  j.at("sigma").get_to(c.sigma);
  j.at("ds").get_to(c.ds);
  j.at("T").get_to(c.T);
  j.at("tol").get_to(c.tol);
  j.at("witness_horizon").get_to(c.witness_horizon);
  j.at("threads").get_to(c.threads);
}

void to_json(json& j, const SmallSEntry& e) {
  j = {{"s", e.s}, {"W_prime_0_parallel", e.w_parallel}, {"W_prime_0_perp", e.w_perp},
       {"pass", e.pass}};
}
void from_json(const json& j, SmallSEntry& e) {
  j.at("s").get_to(e.s);
  j.at("W_prime_0_parallel").get_to(e.w_parallel);
  j.at("W_prime_0_perp").get_to(e.w_perp);
  j.at("pass").get_to(e.pass);
}

void to_json(json& j, const MidSEntry& e) {
  j = {{"s", e.s},
       {"min_U_parallel", e.min_parallel},
       {"min_U_perp", e.min_perp},
       {"t_min_parallel", e.t_min_parallel},
       {"t_min_perp", e.t_min_perp},
       {"U_prime_T_parallel", e.slope_parallel_T},
       {"U_prime_T_perp", e.slope_perp_T},
       {"pass", e.pass}};
}
void from_json(const json& j, MidSEntry& e) {
  j.at("s").get_to(e.s);
  j.at("min_U_parallel").get_to(e.min_parallel);
  j.at("min_U_perp").get_to(e.min_perp);
  j.at("t_min_parallel").get_to(e.t_min_parallel);
  j.at("t_min_perp").get_to(e.t_min_perp);
  j.at("U_prime_T_parallel").get_to(e.slope_parallel_T);
  j.at("U_prime_T_perp").get_to(e.slope_perp_T);
  j.at("pass").get_to(e.pass);
}

void to_json(json& j, const Witness& w) {
  j = {{"Y0", w.Y0},
       {"W_prime_0", w.W_prime_0},
       {"Y_at_horizon", w.Y_at_horizon},
       {"Y_at_minus_horizon", w.Y_at_minus_horizon},
       {"min_Y", w.min_Y},
       {"pass", w.pass}};
}
void from_json(const json& j, Witness& w) {
  j.at("Y0").get_to(w.Y0);
  j.at("W_prime_0").get_to(w.W_prime_0);
  j.at("Y_at_horizon").get_to(w.Y_at_horizon);
  j.at("Y_at_minus_horizon").get_to(w.Y_at_minus_horizon);
  j.at("min_Y").get_to(w.min_Y);
  j.at("pass").get_to(w.pass);
}

void to_json(json& j, const NonTrapping& n) {
  j = {{"a", n.a}, {"worst_margin", n.worst_margin}, {"pass", n.pass}};
}
void from_json(const json& j, NonTrapping& n) {
  j.at("a").get_to(n.a);
  j.at("worst_margin").get_to(n.worst_margin);
  j.at("pass").get_to(n.pass);
}

std::string report_to_json(const ScanReport& rep) {
  json j;
  j["config"] = rep.config;
  j["eps"] = rep.eps;
  j["r_star"] = rep.r_star;
  j["root_residual"] = rep.root_residual;
  j["bracket"] = rep.bracket;
  j["small_s"] = rep.small_s;
  j["d2_parallel"] = rep.d2_parallel;
  j["d2_perp"] = rep.d2_perp;
  j["mid_s"] = rep.mid_s;
  j["large_s_threshold"] = rep.large_s_threshold;
  j["curvature_negativity_certified"] = rep.curvature_negativity_certified;
  j["witness"] = rep.witness;
  j["non_trapping"] = rep.non_trapping;
  j["overall"] = rep.overall;
  j["method"] = rep.method;
  return j.dump(2) + "\n";
}

ScanReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ScanReport rep;
    j.at("config").get_to(rep.config);
    j.at("eps").get_to(rep.eps);
    j.at("r_star").get_to(rep.r_star);
    j.at("root_residual").get_to(rep.root_residual);
    j.at("bracket").get_to(rep.bracket);
    j.at("small_s").get_to(rep.small_s);
    j.at("d2_parallel").get_to(rep.d2_parallel);
    j.at("d2_perp").get_to(rep.d2_perp);
    j.at("mid_s").get_to(rep.mid_s);
    j.at("large_s_threshold").get_to(rep.large_s_threshold);
    j.at("curvature_negativity_certified").get_to(rep.curvature_negativity_certified);
    j.at("witness").get_to(rep.witness);
    j.at("non_trapping").get_to(rep.non_trapping);
    j.at("overall").get_to(rep.overall);
    j.at("method").get_to(rep.method);
    return rep;
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("report_from_json: ") + ex.what());
  }
}

std::string stable_to_json(const StableSolution& y) {
  json j = {{"kind", to_string(y.kind)},
            {"s", y.params.s},
            {"r", y.params.r},
            {"eps", y.params.eps},
            {"Y0", y.Y0},
            {"W_prime_0", y.W_prime_0},
            {"seed_horizon", y.seed_horizon},
            {"seed_residual", y.seed_residual}};
  return j.dump(2) + "\n";
}

}  // namespace ahwarp
