#pragma once

#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "spreadcol/cluster_phase.hpp"

namespace spreadcol {

struct Ceilings {
  double c_hat = 64.0;
  double flagged_fraction = 0.2;
};

/// Everything a run needs besides its input files.
///
/// JSON layout: {"seed": u64, "jobs": n, "params": {"eps", "theta_prime",
/// "window", "pair_floor", "zeta0_override", "eta_override", "h_margin",
/// "k_out", "max_tries", "D_min", "calibration_acceptance",
/// "calibration_samples", "ceilings": {"c_hat", "flagged_fraction"}}}.
/// theta_prime sets window = theta_prime / 3 and pair_floor = theta_prime;
/// explicit window / pair_floor win over it. Without either the window is
/// calibrated per graph.
struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  PipelineParams pipeline;
  std::optional<double> theta_prime;
  Ceilings ceilings;

  /// Throws std::invalid_argument naming the first parameter out of range.
  void validate() const;
};

/// Fields present in `j` override `base`; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json to_json(const RunConfig& config);

}  // namespace spreadcol
