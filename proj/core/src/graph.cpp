#include "spreadcol/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "spreadcol/errors.hpp"
#include "spreadcol/rng.hpp"

namespace spreadcol {

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adj_(n) {
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") out of range for n = " + std::to_string(n));
    }
    if (u == v) {
      throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    }
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (Vertex v = 0; v < n; ++v) {
    auto& list = adj_[v];
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw std::invalid_argument("duplicate edge at vertex " + std::to_string(v));
    }
  }
  num_edges_ = edges.size();
}

void Graph::check_vertex(Vertex v) const {
  if (v >= adj_.size()) {
    throw std::invalid_argument("invalid vertex id " + std::to_string(v));
  }
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
  check_vertex(v);
  return adj_[v];
}

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (const auto& list : adj_) d = std::max(d, list.size());
  return d;
}

std::size_t Graph::min_degree() const {
  if (adj_.empty()) return 0;
  std::size_t d = adj_.front().size();
  for (const auto& list : adj_) d = std::min(d, list.size());
  return d;
}

bool Graph::is_regular() const { return max_degree() == min_degree(); }

bool Graph::has_edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  const auto& list = adj_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (Vertex u = 0; u < adj_.size(); ++u) {
    for (Vertex v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::size_t neighborhood_edges(const Graph& g, Vertex v) {
  const auto nv = g.neighbors(v);
  std::size_t count = 0;
  for (Vertex u : nv) {
    // Both lists are sorted: count |N_u ∩ N_v| restricted to w > u.
    const auto nu = g.neighbors(u);
    auto a = std::upper_bound(nu.begin(), nu.end(), u);
    auto b = std::upper_bound(nv.begin(), nv.end(), u);
    while (a != nu.end() && b != nv.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++count;
        ++a;
        ++b;
      }
    }
  }
  return count;
}

std::size_t neighborhood_complement_edges(const Graph& g, Vertex v) {
  const std::size_t d = g.degree(v);
  return d * (d - (d > 0 ? 1 : 0)) / 2 - neighborhood_edges(g, v);
}

Graph regularize(const Graph& g) {
  const std::size_t n = g.num_vertices();
  const std::size_t d = g.max_degree();
  if (g.is_regular()) return g;

  bool parity_ok = true;
  for (Vertex v = 0; v < n; ++v) {
    const std::size_t f = d - g.degree(v);
    if ((f * (d + 1)) % 2 != 0) parity_ok = false;
  }
  const std::size_t copies = parity_ok ? d + 1 : d + 2;

  std::vector<Edge> edges;
  const auto base = g.edges();
  edges.reserve(base.size() * copies + n * copies * d / 2);
  auto id = [n](std::size_t copy, Vertex v) { return static_cast<Vertex>(copy * n + v); };
  for (std::size_t c = 0; c < copies; ++c) {
    for (auto [u, v] : base) edges.emplace_back(id(c, u), id(c, v));
  }
  for (Vertex v = 0; v < n; ++v) {
    const std::size_t f = d - g.degree(v);
    for (std::size_t offset = 1; offset <= f / 2; ++offset) {
      for (std::size_t c = 0; c < copies; ++c) {
        edges.emplace_back(id(c, v), id((c + offset) % copies, v));
      }
    }
    if (f % 2 == 1) {
      // copies is even here by the parity choice above
      for (std::size_t c = 0; c < copies / 2; ++c) {
        edges.emplace_back(id(c, v), id(c + copies / 2, v));
      }
    }
  }
  Graph out(n * copies, edges);
  if (out.max_degree() != d || out.min_degree() != d) {
    throw InvariantViolated("regularize produced a non-regular graph");
  }
  return out;
}

namespace {

bool contains(const std::vector<Vertex>& list, Vertex v) {
  return std::find(list.begin(), list.end(), v) != list.end();
}

// True when some pair of distinct, non-adjacent vertices still has free points.
bool admissible_pair_exists(const std::vector<Vertex>& points,
                            const std::vector<std::vector<Vertex>>& adj) {
  std::vector<Vertex> open(points);
  std::sort(open.begin(), open.end());
  open.erase(std::unique(open.begin(), open.end()), open.end());
  for (std::size_t i = 0; i < open.size(); ++i) {
    for (std::size_t j = i + 1; j < open.size(); ++j) {
      if (!contains(adj[open[i]], open[j])) return true;
    }
  }
  return false;
}

}  // namespace

Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                         std::size_t max_restarts) {
  if ((n * d) % 2 != 0) {
    throw std::invalid_argument("n*D must be even (n=" + std::to_string(n) +
                                ", D=" + std::to_string(d) + ")");
  }
  if (d >= n) {
    throw std::invalid_argument("D must be smaller than n (n=" + std::to_string(n) +
                                ", D=" + std::to_string(d) + ")");
  }
  Rng rng(seed);
  for (std::size_t attempt = 0; attempt < max_restarts; ++attempt) {
    std::vector<Vertex> points;
    points.reserve(n * d);
    for (Vertex v = 0; v < n; ++v) points.insert(points.end(), d, v);
    std::vector<std::vector<Vertex>> adj(n);
    std::vector<Edge> edges;
    edges.reserve(n * d / 2);

    bool stuck = false;
    std::size_t failures = 0;
    while (!points.empty()) {
      const std::size_t i = rng.uniform(points.size());
      std::size_t j = rng.uniform(points.size() - 1);
      if (j >= i) ++j;
      const Vertex u = points[i];
      const Vertex w = points[j];
      if (u != w && !contains(adj[u], w)) {
        adj[u].push_back(w);
        adj[w].push_back(u);
        edges.emplace_back(std::min(u, w), std::max(u, w));
        const std::size_t hi = std::max(i, j);
        const std::size_t lo = std::min(i, j);
        points[hi] = points.back();
        points.pop_back();
        points[lo] = points.back();
        points.pop_back();
        failures = 0;
        continue;
      }
      if (++failures > 32 + points.size()) {
        if (!admissible_pair_exists(points, adj)) {
          stuck = true;
          break;
        }
        failures = 0;
      }
    }
    if (!stuck) return Graph(n, edges);
  }
  throw MaxTriesExceeded("gen_random_regular: no simple pairing after " +
                         std::to_string(max_restarts) + " restarts");
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  auto edges = a.edges();
  const auto shift = static_cast<Vertex>(a.num_vertices());
  for (auto [u, v] : b.edges()) edges.emplace_back(u + shift, v + shift);
  return Graph(a.num_vertices() + b.num_vertices(), edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, edges);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, static_cast<Vertex>((v + 1) % n));
  return Graph(n, edges);
}

std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    auto& comp = out.emplace_back();
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
  }
  return out;
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  std::vector<std::int64_t> local(g.num_vertices(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= g.num_vertices()) {
      throw std::invalid_argument("invalid vertex id " + std::to_string(vertices[i]));
    }
    if (local[vertices[i]] >= 0) throw std::invalid_argument("repeated vertex in subset");
    local[vertices[i]] = static_cast<std::int64_t>(i);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (Vertex w : g.neighbors(vertices[i])) {
      const auto j = local[w];
      if (j > static_cast<std::int64_t>(i)) {
        edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
      }
    }
  }
  return Graph(vertices.size(), edges);
}

}  // namespace spreadcol
