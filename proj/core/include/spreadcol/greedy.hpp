#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "spreadcol/coloring.hpp"
#include "spreadcol/graph.hpp"
#include "spreadcol/rational.hpp"
#include "spreadcol/rng.hpp"

namespace spreadcol {

/// Sequential list coloring: visit `order` and give each vertex a uniform
/// color from its list minus the colors of already-colored neighbors.
/// `order` must be a permutation of V. With |S_v| >= d(v) + 1 the sampler
/// never gets stuck; otherwise an empty choice throws StuckVertex.
PartialColoring slack_greedy_sample(const Graph& g, const ListAssignment& lists,
                                    std::span<const Vertex> order, Rng& rng);

/// Same, in ascending vertex order.
PartialColoring slack_greedy_sample(const Graph& g, const ListAssignment& lists, Rng& rng);

struct EnumerationLimits {
  std::uint64_t max_nodes = 100'000'000;
};

/// Callback receives each proper list coloring once; return false to stop.
using ColoringVisitor = std::function<bool(const PartialColoring&)>;

/// Exhaustive backtracking over proper S-colorings, branching on the vertex
/// with the fewest remaining options. Returns the number of colorings visited.
/// Throws CapExceeded once the search tree exceeds `limits.max_nodes`.
std::uint64_t for_each_coloring(const Graph& g, const ListAssignment& lists,
                                const ColoringVisitor& visit, const EnumerationLimits& limits = {});

std::uint64_t count_colorings(const Graph& g, const ListAssignment& lists,
                              const EnumerationLimits& limits = {});

/// P(sigma ⊇ tau) for sigma uniform over proper S-colorings, exactly.
/// Throws Error when G has no S-coloring at all.
Rational exact_containment_uniform(const Graph& g, const ListAssignment& lists,
                                   const PartialColoring& tau, const EnumerationLimits& limits = {});

/// Random-greedy coloring with palette [D+1]: repeatedly color a uniformly
/// random uncolored vertex with a uniform color missing from its colored
/// neighborhood.
PartialColoring random_greedy_sample(const Graph& g, Rng& rng);

/// Exact probability that random_greedy_sample returns `target`, by dynamic
/// programming over colored subsets. Requires n <= 24.
Rational random_greedy_probability(const Graph& g, const PartialColoring& target);

enum class CounterexampleKind { RedThumb, CliqueMinusClique, GreedyBoys };

CounterexampleKind parse_counterexample_kind(std::string_view name);
std::string_view to_string(CounterexampleKind kind);

struct Counterexample {
  CounterexampleKind kind{};
  std::size_t degree = 0;
  Graph graph;
  ListAssignment lists;
  /// Assignment whose probability breaks O(1/D)-spread.
  PartialColoring target;
};

/// red_thumb: K_{D+1} on {0..D}, S_0 = {0..D+1}, other lists [D+1], target 0 -> 0.
/// clique_minus_clique: D+1 = s^2; U = {0..s-1} independent, every other pair
///   adjacent, lists [D+1], target U -> D+1.
/// greedy_boys: K_{D,D} with sides {0..D-1}, {D..2D-1}; target i -> i+1 on the
///   first side and D+1 on the second.
Counterexample build_counterexample(CounterexampleKind kind, std::size_t d);

}  // namespace spreadcol
