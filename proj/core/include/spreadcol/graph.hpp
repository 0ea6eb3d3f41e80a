#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace spreadcol {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph with sorted adjacency lists.
///
/// Immutable after construction: construction rejects self-loops, duplicate
/// edges and out-of-range endpoints, so every Graph value is simple and its
/// adjacency is symmetric.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  std::span<const Vertex> neighbors(Vertex v) const;
  std::size_t degree(Vertex v) const { return neighbors(v).size(); }
  std::size_t max_degree() const;
  std::size_t min_degree() const;
  bool is_regular() const;

  /// O(log d) via binary search on the sorted list.
  bool has_edge(Vertex u, Vertex v) const;

  /// Edges with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  /// Always true for a constructed Graph; kept for serialized metadata.
  static constexpr bool is_simple() { return true; }

  bool operator==(const Graph&) const = default;

 private:
  void check_vertex(Vertex v) const;

  std::vector<std::vector<Vertex>> adj_;
  std::size_t num_edges_ = 0;
};

/// Colors are positive integers in general; the full palette of a graph with
/// maximum degree D is {1, ..., D+1}.
struct Palette {
  std::uint32_t size = 0;

  static Palette for_max_degree(std::size_t d) { return Palette{static_cast<std::uint32_t>(d + 1)}; }
  std::uint32_t first() const { return 1; }
  std::uint32_t last() const { return size; }
};

/// Number of non-adjacent pairs inside N_v, i.e. edges of the complement
/// graph restricted to the neighborhood of v.
std::size_t neighborhood_complement_edges(const Graph& g, Vertex v);

/// Number of edges of G[N_v].
std::size_t neighborhood_edges(const Graph& g, Vertex v);

/// D-regular supergraph (D = max degree) containing G as an induced subgraph
/// on vertex ids [0, n). Returns G itself when it is already regular.
///
/// Uses m copies of G (m = D+1, or D+2 when parity forces it) and joins the
/// copies of each deficient vertex by a circulant of the missing degree.
Graph regularize(const Graph& g);

/// Random simple D-regular graph on n vertices, deterministic in `seed`.
///
/// Pairs configuration-model points one at a time, rejecting loops and
/// multi-edges, and restarts from scratch when no admissible pair remains.
/// Throws std::invalid_argument for nD odd or D >= n, and
/// MaxTriesExceeded after `max_restarts` restarts.
Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                         std::size_t max_restarts = 1000);

/// Disjoint union; vertices of b are shifted by a.num_vertices().
Graph disjoint_union(const Graph& a, const Graph& b);

/// Complete graph K_n.
Graph complete_graph(std::size_t n);

/// Cycle C_n (n >= 3).
Graph cycle_graph(std::size_t n);

/// Connected components, each sorted, ordered by smallest vertex.
std::vector<std::vector<Vertex>> connected_components(const Graph& g);

/// Induced subgraph on `vertices` (relabelled 0..k-1 in the given order).
Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

}  // namespace spreadcol
