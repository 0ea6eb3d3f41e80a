#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spreadcol/coloring.hpp"
#include "spreadcol/graph.hpp"
#include "spreadcol/rational.hpp"
#include "spreadcol/rng.hpp"

namespace spreadcol {

/// Hypergraph F on a named ground set X = {0..|X|-1}. Each edge is a sorted,
/// duplicate-free list of element indices.
struct Hypergraph {
  std::vector<std::string> ground;
  std::vector<std::vector<std::uint32_t>> edges;

  std::size_t max_edge_size() const;
  bool is_bounded(std::size_t ell) const { return max_edge_size() <= ell; }
  /// Throws std::invalid_argument on out-of-range or repeated elements.
  void validate() const;
};

/// sum over A in F of prod over x in A of q_x. Throws std::invalid_argument
/// when a weight lies outside [0, 1] or q does not match the ground set.
Rational expense(const Hypergraph& f, const std::vector<Rational>& q);

struct CostResult {
  Rational value;
  /// Witness cover as bitmasks over the ground set.
  std::vector<std::uint32_t> cover;
};

/// Exact q-cost: the minimum expense of a hypergraph G such that every edge of
/// F contains an edge of G. Depth-first over the first uncovered edge A and a
/// choice B ⊆ A, keeping G an antichain and bounding by the heaviest
/// uncovered edge. Requires |X| <= 16 (CapExceeded otherwise).
CostResult cost_bruteforce(const Hypergraph& f, const std::vector<Rational>& q);

/// Reads {ground: [...], edges: [[...], ...], q: {name: weight}}. Ground
/// entries may be strings or numbers. Weights are read exactly from their
/// decimal or "p/q" text, so 0.3 means 3/10.
void from_json(const nlohmann::json& j, Hypergraph& f);
std::vector<Rational> weights_from_json(const nlohmann::json& j, const Hypergraph& f);
void to_json(nlohmann::json& j, const Hypergraph& f);

enum class Colorability { Colorable, NotColorable, Indeterminate };

std::string_view to_string(Colorability c);

struct ColorabilityResult {
  Colorability verdict = Colorability::Indeterminate;
  std::uint64_t nodes = 0;
  /// A proper L-coloring when verdict is Colorable.
  PartialColoring witness;
};

/// Backtracking over the vertex with the fewest remaining list colors, with
/// forward checking. Indeterminate once more than `max_nodes` nodes are
/// expanded.
ColorabilityResult decide_list_colorable(const Graph& g, const ListAssignment& lists,
                                         std::uint64_t max_nodes = 10'000'000);

struct SparsificationRow {
  std::size_t k = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t indeterminate = 0;
  double rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
};

struct SparsificationCurve {
  std::vector<SparsificationRow> rows;

  /// Each rate's interval reaches up to the previous one: rows[i+1].ci_hi >= rows[i].ci_lo.
  bool nondecreasing_within_ci() const;
  void write_csv(std::ostream& out) const;
};

struct SparsificationParams {
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  std::uint64_t max_nodes = 10'000'000;
  std::size_t jobs = 1;
};

/// Independent uniform k-subsets of [D+1] per vertex, k in `k_values`
/// (strictly increasing, 1 <= k <= D+1); indeterminate trials count as
/// failures. Trial t of the row for k uses derive_seed(derive_seed(seed, k), t).
SparsificationCurve sparsification_scan(const Graph& g, const std::vector<std::size_t>& k_values,
                                        const SparsificationParams& params);

/// A uniform k-subset of {1..palette}, sorted.
std::vector<Color> random_sublist(std::size_t palette, std::size_t k, Rng& rng);

}  // namespace spreadcol
