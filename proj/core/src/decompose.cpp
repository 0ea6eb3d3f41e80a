#include "spreadcol/decompose.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spreadcol/errors.hpp"

namespace spreadcol {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

struct ClusterCounts {
  std::size_t outside = 0;      // |N_v \ C|
  std::size_t nonneighbor = 0;  // |C \ N[v]|
};

ClusterCounts cluster_counts(const Graph& g, Vertex v, const std::vector<int>& part, int c,
                             std::size_t cluster_size) {
  std::size_t inside = 0;
  for (Vertex w : g.neighbors(v)) {
    if (part[w] == c) ++inside;
  }
  return {g.degree(v) - inside, cluster_size - 1 - inside};
}

}  // namespace

Decomposition sparse_dense_decompose(const Graph& g, double eps_in, const DecomposeParams& params) {
  if (!(eps_in > 0.0 && eps_in < 1.0 / 20.0)) {
    throw std::invalid_argument("eps_in must lie in (0, 1/20), got " + std::to_string(eps_in));
  }
  if (!g.is_regular()) throw std::invalid_argument("sparse_dense_decompose needs a regular graph");

  const std::size_t n = g.num_vertices();
  const double d = static_cast<double>(g.max_degree());
  Decomposition dec;
  dec.theta = params.theta_factor * eps_in * eps_in;
  dec.eps = params.eps_factor * eps_in;
  const double sparse_threshold = dec.theta * d * d;

  std::vector<std::size_t> nce(n);
  std::vector<bool> dense(n);
  for (Vertex v = 0; v < n; ++v) {
    nce[v] = neighborhood_complement_edges(g, v);
    dense[v] = static_cast<double>(nce[v]) < sparse_threshold;
  }

  // Friend graph on dense vertices, via closed-neighborhood overlaps of
  // vertices at distance <= 2.
  const double friend_threshold = (1.0 - 2.0 * eps_in) * d;
  DisjointSets sets(n);
  std::vector<std::size_t> overlap(n, 0);
  std::vector<Vertex> touched;
  for (Vertex u = 0; u < n; ++u) {
    if (!dense[u]) continue;
    touched.clear();
    auto bump = [&](Vertex w) {
      if (overlap[w]++ == 0) touched.push_back(w);
    };
    // x ranges over N[u]; every w in N[x] shares x with u.
    auto visit = [&](Vertex x) {
      bump(x);
      for (Vertex w : g.neighbors(x)) bump(w);
    };
    visit(u);
    for (Vertex x : g.neighbors(u)) visit(x);
    for (Vertex w : touched) {
      if (w > u && dense[w] && static_cast<double>(overlap[w]) >= friend_threshold) sets.unite(u, w);
      overlap[w] = 0;
    }
  }

  std::vector<int> part(n, -1);
  std::vector<int> root_to_cluster(n, -1);
  for (Vertex v = 0; v < n; ++v) {
    if (!dense[v]) {
      dec.sparse.push_back(v);
      continue;
    }
    const auto root = sets.find(v);
    if (root_to_cluster[root] < 0) {
      root_to_cluster[root] = static_cast<int>(dec.clusters.size());
      dec.clusters.emplace_back();
    }
    part[v] = root_to_cluster[root];
    dec.clusters[static_cast<std::size_t>(part[v])].push_back(v);
  }

  // Repair: demotion changes the counts of the remaining cluster members, so
  // iterate to a fixed point.
  const double limit = dec.eps * d;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < dec.clusters.size(); ++c) {
      auto& cluster = dec.clusters[c];
      for (std::size_t i = 0; i < cluster.size(); ++i) {
        const Vertex v = cluster[i];
        const auto counts = cluster_counts(g, v, part, static_cast<int>(c), cluster.size());
        if (static_cast<double>(counts.outside) < limit &&
            static_cast<double>(counts.nonneighbor) < limit) {
          continue;
        }
        if (static_cast<double>(nce[v]) < sparse_threshold) {
          throw VerificationFailed("vertex " + std::to_string(v) + " violates the cluster bounds of cluster " +
                                   std::to_string(c) + " (outside " + std::to_string(counts.outside) +
                                   ", non-neighbors " + std::to_string(counts.nonneighbor) +
                                   ", limit " + std::to_string(limit) + ") and is not sparse");
        }
        part[v] = -1;
        dec.sparse.push_back(v);
        cluster.erase(cluster.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  dec.clusters.erase(std::remove_if(dec.clusters.begin(), dec.clusters.end(),
                                    [](const auto& c) { return c.empty(); }),
                     dec.clusters.end());
  std::sort(dec.sparse.begin(), dec.sparse.end());

  const auto report = verify_decomposition(g, dec);
  if (!report.ok()) {
    throw VerificationFailed("decomposition failed verification with " + std::to_string(report.failures) +
                             " failing vertices");
  }
  return dec;
}

DecompositionReport verify_decomposition(const Graph& g, const Decomposition& dec) {
  const std::size_t n = g.num_vertices();
  const double d = static_cast<double>(g.max_degree());
  DecompositionReport report;
  report.worst_sparsity_margin = std::numeric_limits<double>::infinity();
  report.worst_outside_margin = std::numeric_limits<double>::infinity();
  report.worst_nonneighbor_margin = std::numeric_limits<double>::infinity();

  std::vector<int> part(n, -2);
  auto place = [&](Vertex v, int p) {
    if (v >= n || part[v] != -2) {
      report.partition_ok = false;
      return false;
    }
    part[v] = p;
    return true;
  };
  for (Vertex v : dec.sparse) place(v, -1);
  for (std::size_t c = 0; c < dec.clusters.size(); ++c) {
    for (Vertex v : dec.clusters[c]) place(v, static_cast<int>(c));
  }
  if (std::find(part.begin(), part.end(), -2) != part.end()) report.partition_ok = false;

  const double sparse_threshold = dec.theta * d * d;
  const double limit = dec.eps * d;
  for (Vertex v : dec.sparse) {
    if (v >= n) continue;
    VertexCheck check{v, -1};
    const double margin = static_cast<double>(neighborhood_complement_edges(g, v)) - sparse_threshold;
    check.sparsity_ok = margin >= 0.0;
    report.worst_sparsity_margin = std::min(report.worst_sparsity_margin, margin);
    report.vertices.push_back(check);
  }
  for (std::size_t c = 0; c < dec.clusters.size(); ++c) {
    for (Vertex v : dec.clusters[c]) {
      if (v >= n) continue;
      VertexCheck check{v, static_cast<int>(c)};
      const auto counts = cluster_counts(g, v, part, static_cast<int>(c), dec.clusters[c].size());
      const double out_margin = limit - static_cast<double>(counts.outside);
      const double non_margin = limit - static_cast<double>(counts.nonneighbor);
      check.outside_ok = out_margin > 0.0;
      check.nonneighbor_ok = non_margin > 0.0;
      report.worst_outside_margin = std::min(report.worst_outside_margin, out_margin);
      report.worst_nonneighbor_margin = std::min(report.worst_nonneighbor_margin, non_margin);
      report.vertices.push_back(check);
    }
  }
  std::sort(report.vertices.begin(), report.vertices.end(),
            [](const VertexCheck& a, const VertexCheck& b) { return a.v < b.v; });
  report.failures = static_cast<std::size_t>(
      std::count_if(report.vertices.begin(), report.vertices.end(), [](const VertexCheck& c) { return !c.ok(); }));
  return report;
}

void to_json(nlohmann::json& j, const Decomposition& dec) {
  j = nlohmann::json{{"sparse", dec.sparse}, {"clusters", dec.clusters}, {"eps", dec.eps}, {"theta", dec.theta}};
}

void from_json(const nlohmann::json& j, Decomposition& dec) {
  dec.sparse = j.at("sparse").get<std::vector<Vertex>>();
  dec.clusters = j.at("clusters").get<std::vector<std::vector<Vertex>>>();
  dec.eps = j.at("eps").get<double>();
  dec.theta = j.at("theta").get<double>();
}

}  // namespace spreadcol
