#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spreadcol/coloring.hpp"
#include "spreadcol/decompose.hpp"
#include "spreadcol/graph.hpp"
#include "spreadcol/matching.hpp"
#include "spreadcol/rng.hpp"
#include "spreadcol/sparse_phase.hpp"

namespace spreadcol {

struct ClusterParams {
  /// Cluster tolerance ε; the pipeline takes it from the decomposition.
  double eps = 0.4;
  /// Slack demanded on each side of the η hierarchy.
  double h_margin = 1.25;
  std::optional<double> zeta0_override;
  /// Overrides the η formula; still rounded so ηD is a positive integer.
  std::optional<double> eta_override;
  DenseMatchingParams dense;
};

enum class ClusterPath { Small, Large };

std::string_view to_string(ClusterPath path);

/// One cluster C with the coloring outside it fixed.
///
/// B joins local vertex i (C[i]) to y = γ - 1 iff γ is not used by
/// sigma_out on N_{C[i]}. Uncolored vertices of sigma_out impose nothing.
struct ClusterContext {
  std::vector<Vertex> cluster;  // sorted global ids
  Graph h;                      // complement of G[C], on local ids
  std::size_t degree = 0;       // D
  double zeta = 0.0;            // e(H) / D^2
  double eps = 0.0;
  double zeta0 = 0.0;
  /// ηD, set only on the large-ζ path.
  std::size_t eta_d = 0;
  double eta = 0.0;
  ClusterPath path = ClusterPath::Small;
  PartialColoring sigma_out;
  Bigraph b;
};

/// Builds the context. Throws HypothesisViolated if C is not an ε-cluster of
/// g or sigma_out colors a vertex of C, and, on the large-ζ path, if η misses
/// max(1/D, ζ) h <= η <= min(ζ/ε, 1) / h.
ClusterContext build_cluster_context(const Graph& g, std::span<const Vertex> cluster,
                                     const PartialColoring& sigma_out, const ClusterParams& params);

struct ProcessResult {
  /// Global-id coloring of the 2ηD paired vertices.
  PartialColoring pi;
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::vector<Color> colors;
  /// e(H_{i-1}) at the start of each round.
  std::vector<std::size_t> edge_counts;
  /// min over E(H_{i-1}) of common legal colors in Γ_{i-1}, per round.
  std::vector<std::size_t> common_colors;
};

/// ηD rounds of: uniform edge uv of H_{i-1}, uniform common legal color of
/// u and v not used yet, π(u) = π(v) = γ. Asserts e(H_{i-1}) > (ζ - 2ηε)D^2
/// and that every remaining H-edge has more than (1 - 2ε - η)D common colors
/// (InvariantViolated). An empty choice throws EmptyChoiceSet.
ProcessResult process_pair_coloring(const ClusterContext& ctx, Rng& rng);

struct ClusterColoringResult {
  /// Global-id coloring of C.
  PartialColoring coloring;
  ClusterPath path = ClusterPath::Small;
  double z = 0.0;
  std::size_t j = 0;
  std::int64_t r_cap = 0;  // R
  std::size_t process_rounds = 0;
  XPerfectStats matching;
};

/// Small ζ: X-perfect matching of C into Γ with r_x = d_H(x), z = 3(ε + ζD).
/// Large ζ: the pair Process, then C' into Γ' with r_x = d_H(x) - ηD,
/// z = 2(ε + η). The result is checked proper against sigma_out.
ClusterColoringResult color_cluster(const ClusterContext& ctx, Rng& rng, const ClusterParams& params);

struct PipelineParams {
  double eps_in = 0.04;
  DecomposeParams decompose;
  /// Window of the bad event; calibrated on the graph when absent.
  std::optional<double> window;
  double pair_floor = 0.0;
  double calibration_acceptance = 0.75;
  std::size_t calibration_samples = 64;
  std::uint64_t calibration_seed = 0x5eed;
  std::size_t max_tries = 10'000;
  /// h_margin, overrides and dense-matching knobs; eps is taken from the decomposition.
  ClusterParams cluster;
  std::size_t d_min = 3;
};

struct ClusterReport {
  std::size_t index = 0;
  std::size_t size = 0;
  double zeta = 0.0;
  /// "small", "large" or "fallback".
  std::string path;
  std::string reason;
};

struct PipelineResult {
  /// Proper (D+1)-coloring of the input graph.
  PartialColoring coloring;
  /// False when any stage fell back to deterministic greedy.
  bool spread_guarantee = true;
  std::vector<std::string> flags;
  std::vector<ClusterReport> clusters;
  std::size_t sparse_attempts = 0;
  std::size_t t_size = 0;
};

/// Regularization, decomposition and window calibration, done once per graph
/// and reused by every sample.
class PreparedPipeline {
 public:
  PreparedPipeline(const Graph& g, const PipelineParams& params);

  PipelineResult sample(Rng& rng) const;

  const Graph& original() const { return original_; }
  const Graph& regularized() const { return regular_; }
  /// Empty when the decomposition could not be verified.
  const std::optional<Decomposition>& decomposition() const { return decomposition_; }
  const BadEventThresholds& thresholds() const { return thresholds_; }
  std::size_t degree() const { return degree_; }
  nlohmann::json parameters() const;

 private:
  PipelineParams params_;
  Graph original_;
  Graph regular_;
  std::size_t degree_ = 0;
  std::optional<Decomposition> decomposition_;
  std::string decomposition_error_;
  BadEventThresholds thresholds_;
};

/// Spread (D+1)-coloring of g: regularize, decompose, color V*, then each
/// cluster in index order against the current coloring. Recoverable failures
/// (hypothesis checks, empty choices, exhausted retries) complete the affected
/// part by deterministic greedy and clear spread_guarantee; InvariantViolated
/// propagates.
PipelineResult color_graph_spread(const Graph& g, Rng& rng, const PipelineParams& params = {});

/// Smallest-available-color greedy on `vertices` in ascending order, against
/// the colors already in `sigma`.
void greedy_complete(const Graph& g, std::span<const Vertex> vertices, PartialColoring& sigma);

void to_json(nlohmann::json& j, const PipelineResult& result);

}  // namespace spreadcol
