#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spreadcol/rng.hpp"

namespace spreadcol {

/// Bipartite graph on (X, Y) with X = {0..J-1}, Y = {0..|Y|-1}. Adjacency is
/// stored on both sides, sorted and duplicate-free.
class Bigraph {
 public:
  using Side = std::uint32_t;
  using BiEdge = std::pair<Side, Side>;  // (x, y)

  Bigraph() = default;
  Bigraph(std::size_t num_x, std::size_t num_y) : x_adj_(num_x), y_adj_(num_y) {}
  /// Duplicate edges are merged; out-of-range endpoints throw std::invalid_argument.
  Bigraph(std::size_t num_x, std::size_t num_y, std::span<const BiEdge> edges);

  static Bigraph complete(std::size_t num_x, std::size_t num_y);

  std::size_t num_x() const { return x_adj_.size(); }
  std::size_t num_y() const { return y_adj_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  std::span<const Side> x_neighbors(Side x) const { return x_adj_[x]; }
  std::span<const Side> y_neighbors(Side y) const { return y_adj_[y]; }
  std::size_t x_degree(Side x) const { return x_adj_[x].size(); }
  std::size_t y_degree(Side y) const { return y_adj_[y].size(); }
  bool has_edge(Side x, Side y) const;

  std::vector<BiEdge> edges() const;

  /// B[xs, ys] with sides renumbered by position in `xs` and `ys`.
  Bigraph induced(std::span<const Side> xs, std::span<const Side> ys) const;

  bool operator==(const Bigraph&) const = default;

 private:
  std::vector<std::vector<Side>> x_adj_;
  std::vector<std::vector<Side>> y_adj_;
  std::size_t num_edges_ = 0;
};

class Matching {
 public:
  static constexpr Bigraph::Side kUnmatched = UINT32_MAX;

  Matching() = default;
  Matching(std::size_t num_x, std::size_t num_y) : x_mate_(num_x, kUnmatched), y_mate_(num_y, kUnmatched) {}

  /// Throws std::logic_error if either endpoint is already matched.
  void add(Bigraph::Side x, Bigraph::Side y);

  Bigraph::Side mate_of_x(Bigraph::Side x) const { return x_mate_[x]; }
  Bigraph::Side mate_of_y(Bigraph::Side y) const { return y_mate_[y]; }
  std::size_t size() const;
  bool covers_x() const;
  std::vector<Bigraph::BiEdge> edges() const;

  /// Every pair is an edge of `b` and sides match b's dimensions.
  bool valid_in(const Bigraph& b) const;

  bool operator==(const Matching&) const = default;

 private:
  std::vector<Bigraph::Side> x_mate_;
  std::vector<Bigraph::Side> y_mate_;
};

/// Hopcroft-Karp. Deterministic: vertices and neighbor lists are scanned in
/// ascending order.
Matching maximum_matching(const Bigraph& b);

/// A maximum matching if it covers X, otherwise nothing.
std::optional<Matching> perfect_matching(const Bigraph& b);

/// Every vertex on both sides keeps min(k, degree) uniformly chosen distinct
/// incident edges; the result is the union of kept edges.
Bigraph kout_subgraph(const Bigraph& b, std::size_t k, Rng& rng);

struct DenseMatchingParams {
  std::size_t k = 3;
  std::size_t k_max = 16;
  std::size_t max_tries = 10'000;
  double lambda_max = 0.25;
  /// k doubles after `block` consecutive failures, i.e. acceptance below 1 / block.
  std::size_t block = 100;
};

struct DenseMatchingResult {
  Matching matching;
  std::size_t attempts = 0;
  std::size_t final_k = 0;
};

/// Perfect matching of a balanced F (|X| = |Y| = I, every degree >= (1 - lambda) I)
/// drawn by repeating K = kout_subgraph(F, k); M = maximum_matching(K) until
/// M is perfect. Throws HypothesisViolated when F is unbalanced, lambda exceeds
/// lambda_max or a degree is too small, and MaxTriesExceeded when no attempt
/// succeeds.
DenseMatchingResult spread_matching_dense(const Bigraph& f, double lambda, Rng& rng,
                                          const DenseMatchingParams& params = {});

struct XPerfectParams {
  /// Deficits r_x; when absent, r_x = J - d_B(x).
  std::optional<std::vector<std::int64_t>> r;
  DenseMatchingParams dense;
};

struct XPerfectStats {
  double delta = 0.0;
  std::size_t unpopular = 0;  // |U|
  std::int64_t r = 0;         // |U| - R
  bool greedy_phase = false;
  /// e(B[X_i, U_i]) for i = 0..r when the greedy phase ran.
  std::vector<std::size_t> greedy_edge_counts;
  /// Whether the e(B[X_i, U_i]) >= r delta J / 2 chain was asserted (|U| < delta J / 20).
  bool chain_asserted = false;
  std::size_t dense_size = 0;  // I
  double dense_lambda = 0.0;   // 1 - min degree of F / I
  std::size_t dense_attempts = 0;
  std::size_t dense_k = 0;
};

struct XPerfectResult {
  Matching matching;
  XPerfectStats stats;
};

/// X-perfect matching of B with |Y| = J + R, assembled from a uniform greedy
/// matching into the unpopular colors U = {y : d_B(y) < (1 - delta) J},
/// delta = 5 sqrt(z), followed by spread_matching_dense on what is left.
///
/// Hypotheses checked up front: 0 <= R <= zJ, d_B(x) >= J - r_x, max r_x <= zJ,
/// sum r_x <= zJ (HypothesisViolated, or NegativeR for R < 0). An empty greedy
/// choice throws EmptyChoiceSet. Edge-count inequalities of the greedy phase
/// and validity of the output throw InvariantViolated.
XPerfectResult spread_X_perfect_matching(const Bigraph& b, double z, Rng& rng, const XPerfectParams& params = {});

}  // namespace spreadcol
