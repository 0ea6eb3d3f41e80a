#include "spreadcol/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace spreadcol {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown " + where + " key '" + key + "'");
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void RunConfig::validate() const {
  const auto& p = pipeline;
  require(p.eps_in > 0.0 && p.eps_in < 0.05, "eps must lie in (0, 1/20)");
  require(!theta_prime || (*theta_prime > 0.0 && *theta_prime <= 1.0), "theta_prime must lie in (0, 1]");
  require(!p.window || *p.window >= 0.0, "window must be nonnegative");
  require(p.pair_floor >= 0.0 && p.pair_floor <= 1.0, "pair_floor must lie in [0, 1]");
  require(p.cluster.h_margin >= 1.0, "h_margin must be at least 1");
  require(!p.cluster.zeta0_override || *p.cluster.zeta0_override >= 0.0, "zeta0_override must be nonnegative");
  require(!p.cluster.eta_override || (*p.cluster.eta_override > 0.0 && *p.cluster.eta_override <= 1.0),
          "eta_override must lie in (0, 1]");
  require(p.cluster.dense.k >= 1 && p.cluster.dense.k <= p.cluster.dense.k_max, "k_out must lie in [1, 16]");
  require(p.max_tries >= 1 && p.cluster.dense.max_tries >= 1, "max_tries must be positive");
  require(p.d_min >= 1, "D_min must be positive");
  require(p.calibration_acceptance > 0.0 && p.calibration_acceptance <= 1.0,
          "calibration_acceptance must lie in (0, 1]");
  require(p.calibration_samples >= 1, "calibration_samples must be positive");
  require(ceilings.c_hat > 0.0, "ceilings.c_hat must be positive");
  require(ceilings.flagged_fraction >= 0.0 && ceilings.flagged_fraction <= 1.0,
          "ceilings.flagged_fraction must lie in [0, 1]");
  require(jobs >= 1, "jobs must be positive");
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig base) {
  reject_unknown(j, {"seed", "jobs", "params"}, "config");
  RunConfig c = std::move(base);
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("jobs")) c.jobs = j.at("jobs").get<std::size_t>();
  if (j.contains("params")) {
    const auto& p = j.at("params");
    reject_unknown(p,
                   {"eps", "theta_prime", "window", "pair_floor", "zeta0_override", "eta_override", "h_margin", "k_out",
                    "max_tries", "D_min", "calibration_acceptance", "calibration_samples", "ceilings"},
                   "params");
    auto& pp = c.pipeline;
    if (p.contains("eps")) pp.eps_in = p.at("eps").get<double>();
    if (p.contains("theta_prime")) {
      c.theta_prime = p.at("theta_prime").get<double>();
      const auto coupled = BadEventThresholds::coupled(*c.theta_prime);
      pp.window = coupled.window;
      pp.pair_floor = coupled.pair_floor;
    }
    if (p.contains("window")) pp.window = p.at("window").get<double>();
    if (p.contains("pair_floor")) pp.pair_floor = p.at("pair_floor").get<double>();
    if (p.contains("zeta0_override")) pp.cluster.zeta0_override = p.at("zeta0_override").get<double>();
    if (p.contains("eta_override")) pp.cluster.eta_override = p.at("eta_override").get<double>();
    if (p.contains("h_margin")) pp.cluster.h_margin = p.at("h_margin").get<double>();
    if (p.contains("k_out")) pp.cluster.dense.k = p.at("k_out").get<std::size_t>();
    if (p.contains("max_tries")) {
      pp.max_tries = p.at("max_tries").get<std::size_t>();
      pp.cluster.dense.max_tries = pp.max_tries;
    }
    if (p.contains("D_min")) pp.d_min = p.at("D_min").get<std::size_t>();
    if (p.contains("calibration_acceptance")) pp.calibration_acceptance = p.at("calibration_acceptance").get<double>();
    if (p.contains("calibration_samples")) pp.calibration_samples = p.at("calibration_samples").get<std::size_t>();
    if (p.contains("ceilings")) {
      const auto& ce = p.at("ceilings");
      reject_unknown(ce, {"c_hat", "flagged_fraction"}, "ceilings");
      if (ce.contains("c_hat")) c.ceilings.c_hat = ce.at("c_hat").get<double>();
      if (ce.contains("flagged_fraction")) c.ceilings.flagged_fraction = ce.at("flagged_fraction").get<double>();
    }
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  const auto& pp = c.pipeline;
  nlohmann::json params{{"eps", pp.eps_in},
                        {"pair_floor", pp.pair_floor},
                        {"h_margin", pp.cluster.h_margin},
                        {"k_out", pp.cluster.dense.k},
                        {"max_tries", pp.max_tries},
                        {"D_min", pp.d_min},
                        {"calibration_acceptance", pp.calibration_acceptance},
                        {"calibration_samples", pp.calibration_samples},
                        {"ceilings", {{"c_hat", c.ceilings.c_hat}, {"flagged_fraction", c.ceilings.flagged_fraction}}}};
  if (c.theta_prime) params["theta_prime"] = *c.theta_prime;
  if (pp.window) params["window"] = *pp.window;
  if (pp.cluster.zeta0_override) params["zeta0_override"] = *pp.cluster.zeta0_override;
  if (pp.cluster.eta_override) params["eta_override"] = *pp.cluster.eta_override;
  return nlohmann::json{{"seed", c.seed}, {"jobs", c.jobs}, {"params", std::move(params)}};
}

}  // namespace spreadcol
