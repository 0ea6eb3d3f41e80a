#include "spreadcol/greedy.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "spreadcol/errors.hpp"

namespace spreadcol {

PartialColoring slack_greedy_sample(const Graph& g, const ListAssignment& lists,
                                    std::span<const Vertex> order, Rng& rng) {
  lists.check_against(g);
  const std::size_t n = g.num_vertices();
  if (order.size() != n) throw std::invalid_argument("order must be a permutation of V");
  std::vector<bool> seen(n, false);
  for (Vertex v : order) {
    if (v >= n || seen[v]) throw std::invalid_argument("order must be a permutation of V");
    seen[v] = true;
  }

  PartialColoring sigma(n);
  std::vector<Color> available;
  for (Vertex v : order) {
    available.clear();
    for (Color c : lists[v]) {
      const auto nbrs = g.neighbors(v);
      const bool used = std::any_of(nbrs.begin(), nbrs.end(), [&](Vertex w) { return sigma[w] == c; });
      if (!used) available.push_back(c);
    }
    if (available.empty()) {
      throw StuckVertex("no available color at vertex " + std::to_string(v));
    }
    sigma.assign(v, available[rng.uniform(available.size())]);
  }
  return sigma;
}

PartialColoring slack_greedy_sample(const Graph& g, const ListAssignment& lists, Rng& rng) {
  std::vector<Vertex> order(g.num_vertices());
  std::iota(order.begin(), order.end(), Vertex{0});
  return slack_greedy_sample(g, lists, order, rng);
}

namespace {

class Enumerator {
 public:
  Enumerator(const Graph& g, const ListAssignment& lists, const ColoringVisitor& visit,
             const EnumerationLimits& limits)
      : g_(g), lists_(lists), visit_(visit), limits_(limits), sigma_(g.num_vertices()) {}

  std::uint64_t run() {
    search(g_.num_vertices());
    return found_;
  }

 private:
  bool available(Vertex v, Color c) const {
    for (Vertex w : g_.neighbors(v)) {
      if (sigma_[w] == c) return false;
    }
    return true;
  }

  // Returns false when the visitor asked to stop.
  bool search(std::size_t remaining) {
    if (++nodes_ > limits_.max_nodes) {
      throw CapExceeded("coloring enumeration exceeded " + std::to_string(limits_.max_nodes) + " nodes");
    }
    if (remaining == 0) {
      ++found_;
      return visit_ ? visit_(sigma_) : true;
    }
    Vertex best = 0;
    std::size_t best_count = SIZE_MAX;
    for (Vertex v = 0; v < g_.num_vertices(); ++v) {
      if (sigma_.is_colored(v)) continue;
      std::size_t count = 0;
      for (Color c : lists_[v]) count += available(v, c) ? 1 : 0;
      if (count < best_count) {
        best = v;
        best_count = count;
        if (count == 0) return true;
      }
    }
    for (Color c : lists_[best]) {
      if (!available(best, c)) continue;
      sigma_.assign(best, c);
      const bool keep_going = search(remaining - 1);
      sigma_.clear(best);
      if (!keep_going) return false;
    }
    return true;
  }

  const Graph& g_;
  const ListAssignment& lists_;
  const ColoringVisitor& visit_;
  EnumerationLimits limits_;
  PartialColoring sigma_;
  std::uint64_t nodes_ = 0;
  std::uint64_t found_ = 0;
};

}  // namespace

std::uint64_t for_each_coloring(const Graph& g, const ListAssignment& lists,
                                const ColoringVisitor& visit, const EnumerationLimits& limits) {
  lists.check_against(g);
  return Enumerator(g, lists, visit, limits).run();
}

std::uint64_t count_colorings(const Graph& g, const ListAssignment& lists, const EnumerationLimits& limits) {
  return for_each_coloring(g, lists, ColoringVisitor{}, limits);
}

Rational exact_containment_uniform(const Graph& g, const ListAssignment& lists, const PartialColoring& tau,
                                   const EnumerationLimits& limits) {
  lists.check_against(g);
  if (tau.num_vertices() != g.num_vertices()) throw std::invalid_argument("tau has the wrong vertex count");
  const std::uint64_t total = count_colorings(g, lists, limits);
  if (total == 0) throw Error("graph has no proper list coloring; containment is undefined");

  std::vector<std::vector<Color>> restricted(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!tau.is_colored(v)) {
      const auto list = lists[v];
      restricted[v].assign(list.begin(), list.end());
    } else if (lists.allows(v, tau[v])) {
      restricted[v] = {tau[v]};
    } else {
      return Rational(0);
    }
  }
  const std::uint64_t favorable = count_colorings(g, ListAssignment(std::move(restricted)), limits);
  return Rational(BigInt(favorable), BigInt(total));
}

PartialColoring random_greedy_sample(const Graph& g, Rng& rng) {
  const std::size_t n = g.num_vertices();
  const auto palette = static_cast<Color>(g.max_degree() + 1);
  PartialColoring tau(n);
  std::vector<Vertex> uncolored(n);
  std::iota(uncolored.begin(), uncolored.end(), Vertex{0});
  std::vector<bool> used(palette + 1);
  std::vector<Color> free;
  while (!uncolored.empty()) {
    const std::size_t pick = rng.uniform(uncolored.size());
    const Vertex v = uncolored[pick];
    uncolored[pick] = uncolored.back();
    uncolored.pop_back();

    std::fill(used.begin(), used.end(), false);
    for (Vertex w : g.neighbors(v)) {
      if (tau.is_colored(w)) used[tau[w]] = true;
    }
    free.clear();
    for (Color c = 1; c <= palette; ++c) {
      if (!used[c]) free.push_back(c);
    }
    tau.assign(v, free[rng.uniform(free.size())]);
  }
  return tau;
}

Rational random_greedy_probability(const Graph& g, const PartialColoring& target) {
  const std::size_t n = g.num_vertices();
  if (n > 24) throw std::invalid_argument("random_greedy_probability supports n <= 24");
  if (target.num_vertices() != n || !target.is_total()) {
    throw std::invalid_argument("target must be a total coloring of G");
  }
  const auto palette = g.max_degree() + 1;
  for (Vertex v = 0; v < n; ++v) {
    if (target[v] < 1 || target[v] > palette) return Rational(0);
  }
  if (!target.is_proper(g)) return Rational(0);

  // prob[S]: probability that the first |S| steps colored exactly S, each
  // vertex with its target color.
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<Rational> prob(full + 1);
  prob[0] = 1;
  std::vector<bool> seen(palette + 1);
  for (std::size_t set = 0; set < full; ++set) {
    if (prob[set] == 0) continue;
    const auto colored = static_cast<std::size_t>(std::popcount(set));
    const Rational pick_vertex = prob[set] / static_cast<unsigned>(n - colored);
    for (Vertex v = 0; v < n; ++v) {
      if (set & (std::size_t{1} << v)) continue;
      std::fill(seen.begin(), seen.end(), false);
      std::size_t blocked = 0;
      for (Vertex w : g.neighbors(v)) {
        if ((set & (std::size_t{1} << w)) && !seen[target[w]]) {
          seen[target[w]] = true;
          ++blocked;
        }
      }
      prob[set | (std::size_t{1} << v)] += pick_vertex / static_cast<unsigned>(palette - blocked);
    }
  }
  return prob[full];
}

CounterexampleKind parse_counterexample_kind(std::string_view name) {
  if (name == "red_thumb") return CounterexampleKind::RedThumb;
  if (name == "clique_minus_clique") return CounterexampleKind::CliqueMinusClique;
  if (name == "greedy_boys") return CounterexampleKind::GreedyBoys;
  throw std::invalid_argument("unknown counterexample kind '" + std::string(name) + "'");
}

std::string_view to_string(CounterexampleKind kind) {
  switch (kind) {
    case CounterexampleKind::RedThumb:
      return "red_thumb";
    case CounterexampleKind::CliqueMinusClique:
      return "clique_minus_clique";
    case CounterexampleKind::GreedyBoys:
      return "greedy_boys";
  }
  return "unknown";
}

Counterexample build_counterexample(CounterexampleKind kind, std::size_t d) {
  Counterexample out;
  out.kind = kind;
  out.degree = d;
  const auto top = static_cast<Color>(d + 1);
  switch (kind) {
    case CounterexampleKind::RedThumb: {
      if (d < 1) throw std::invalid_argument("red_thumb needs D >= 1");
      out.graph = complete_graph(d + 1);
      std::vector<std::vector<Color>> lists(d + 1);
      for (Color c = 0; c <= top; ++c) lists[0].push_back(c);
      for (std::size_t i = 1; i <= d; ++i) {
        for (Color c = 1; c <= top; ++c) lists[i].push_back(c);
      }
      out.lists = ListAssignment(std::move(lists));
      out.target = PartialColoring(d + 1);
      out.target.assign(0, 0);
      break;
    }
    case CounterexampleKind::CliqueMinusClique: {
      const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d + 1))));
      if (s * s != d + 1 || s < 2) {
        throw std::invalid_argument("clique_minus_clique needs D+1 to be a perfect square >= 4");
      }
      std::vector<Edge> edges;
      for (Vertex u = 0; u <= d; ++u) {
        for (Vertex v = u + 1; v <= d; ++v) {
          if (v >= s) edges.emplace_back(u, v);
        }
      }
      out.graph = Graph(d + 1, edges);
      out.lists = ListAssignment::uniform(d + 1, 1, top);
      out.target = PartialColoring(d + 1);
      for (Vertex u = 0; u < s; ++u) out.target.assign(u, top);
      break;
    }
    case CounterexampleKind::GreedyBoys: {
      if (d < 1) throw std::invalid_argument("greedy_boys needs D >= 1");
      std::vector<Edge> edges;
      for (Vertex u = 0; u < d; ++u) {
        for (Vertex v = static_cast<Vertex>(d); v < 2 * d; ++v) edges.emplace_back(u, v);
      }
      out.graph = Graph(2 * d, edges);
      out.lists = ListAssignment::uniform(2 * d, 1, top);
      out.target = PartialColoring(2 * d);
      for (Vertex u = 0; u < d; ++u) out.target.assign(u, u + 1);
      for (auto v = static_cast<Vertex>(d); v < 2 * d; ++v) out.target.assign(v, top);
      break;
    }
  }
  return out;
}

}  // namespace spreadcol
