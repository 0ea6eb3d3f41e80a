#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "spreadcol/coloring.hpp"
#include "spreadcol/decompose.hpp"
#include "spreadcol/graph.hpp"
#include "spreadcol/rng.hpp"

namespace spreadcol {

/// One label in [1, D+1] per vertex.
using Labeling = std::vector<Color>;

/// Thresholds of the bad event A_v:
///   |N_v ∩ T| outside [(1/e - window) D, (1/e + window) D], or |P_v| < pair_floor * D.
/// With a single parameter theta' the classical coupling is window = theta'/3,
/// pair_floor = theta'.
struct BadEventThresholds {
  double window = 0.0;
  double pair_floor = 0.0;

  static BadEventThresholds coupled(double theta_prime) { return {theta_prime / 3.0, theta_prime}; }
};

struct LabelingStats {
  /// Membership in T = {v : no neighbor shares v's label}, over all of V.
  std::vector<bool> in_t;
  /// The audited vertices (V*), in the order given.
  std::vector<Vertex> vertices;
  std::vector<std::size_t> t_neighbors;  // |N_v ∩ T|
  std::vector<std::size_t> pair_count;   // |P_v|
  std::vector<bool> bad;                 // A_v

  std::size_t num_bad() const;
  std::vector<Vertex> t_set() const;
};

Labeling uniform_labeling(std::size_t n, Color palette_size, Rng& rng);

/// T as a membership vector.
std::vector<bool> compute_t(const Graph& g, std::span<const Color> tau);

/// |P_v|: non-adjacent pairs u, w in N_v with equal labels such that no other
/// vertex of N_v ∪ N_u ∪ N_w carries that label.
std::size_t count_isolated_pairs(const Graph& g, std::span<const Color> tau, Vertex v);

LabelingStats label_statistics(const Graph& g, std::span<const Color> tau, std::span<const Vertex> vstar,
                               const BadEventThresholds& thresholds);
LabelingStats label_statistics(const Graph& g, std::span<const Color> tau, std::span<const Vertex> vstar,
                               double theta_prime);

struct ConditionedLabeling {
  Labeling tau;
  /// Attempts used by each connected component that meets V* (in order of
  /// smallest vertex).
  std::vector<std::size_t> attempts;
  std::size_t total_attempts() const;
};

/// A uniform labeling conditioned on no A_v (v in V*), by rejection.
///
/// The events of different connected components are independent, so each
/// component is resampled on its own with a stream derived from one master
/// draw of `rng`; the result has exactly the conditional law. Throws
/// MaxTriesExceeded when some component needs more than `max_tries` draws.
ConditionedLabeling sample_conditioned_labeling(const Graph& g, std::span<const Vertex> vstar,
                                                const BadEventThresholds& thresholds, Rng& rng,
                                                std::size_t max_tries = 10'000);

/// Smallest window such that at least `target_acceptance` of `samples`
/// uniform labelings avoid every A_v (with the given pair floor). Returns
/// +infinity when the pair floor alone makes acceptance impossible.
double calibrate_window(const Graph& g, std::span<const Vertex> vstar, double pair_floor,
                        double target_acceptance, std::size_t samples, Rng& rng);

struct SparsePhaseParams {
  BadEventThresholds thresholds;
  std::size_t max_tries = 10'000;
};

struct SparsePhaseResult {
  /// Proper coloring of V* only.
  PartialColoring coloring;
  std::vector<std::size_t> attempts;
  std::size_t t_size = 0;
  std::size_t handoff_size = 0;
  /// min over v in V* \ T of |S_v| / D (infinity when the hand-off is empty).
  double min_list_fraction = 0.0;
  /// max over v in V* \ T of d_{G'}(v) / D.
  double max_residual_degree_fraction = 0.0;
};

/// Colors V*: the conditioned labeling on T, then slack greedy on
/// G' = G[V* \ T] with lists Γ \ σ(T ∩ N_v). Labels on T \ V* are dropped.
///
/// Checks on every run that σ|_T is proper and that each hand-off vertex has
/// d_{G'}(v) <= (1 - 1/e + window) D and
/// |S_v| >= D + 1 - (1/e + window) D + pair_floor * D; a failure throws
/// InvariantViolated.
SparsePhaseResult sparse_phase_color(const Graph& g, const Decomposition& dec, Rng& rng,
                                     const SparsePhaseParams& params);

void to_json(nlohmann::json& j, const LabelingStats& stats);

}  // namespace spreadcol
