// Independent reference computations for the unit and acceptance tests.
// Everything here is deliberately naive: full enumeration straight from the
// definitions, sharing no code paths with the library beyond its data types.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "spreadcol/coloring.hpp"
#include "spreadcol/graph.hpp"
#include "spreadcol/matching.hpp"
#include "spreadcol/rational.hpp"

namespace oracle {

using spreadcol::Color;
using spreadcol::Graph;
using spreadcol::ListAssignment;
using spreadcol::Rational;
using spreadcol::Vertex;

using Assignment = std::vector<Color>;
using Distribution = std::map<Assignment, Rational>;

inline bool proper(const Graph& g, const Assignment& a) {
  for (auto [u, v] : g.edges()) {
    if (a[u] != 0 && a[u] == a[v]) return false;
  }
  return true;
}

/// Every proper list coloring, by walking the full product of the lists.
inline std::vector<Assignment> all_colorings(const Graph& g, const ListAssignment& lists) {
  const std::size_t n = g.num_vertices();
  std::vector<Assignment> out;
  Assignment a(n, 0);
  std::vector<std::size_t> idx(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (lists[v].empty()) return out;
  }
  while (true) {
    for (Vertex v = 0; v < n; ++v) a[v] = lists[v][idx[v]];
    if (proper(g, a)) out.push_back(a);
    std::size_t v = 0;
    while (v < n && ++idx[v] == lists[static_cast<Vertex>(v)].size()) idx[v++] = 0;
    if (v == n) break;
  }
  return out;
}

/// Law of sequential greedy in `order`, each color uniform over what is left.
inline Distribution slack_greedy_law(const Graph& g, const ListAssignment& lists, const std::vector<Vertex>& order) {
  Distribution law;
  Assignment a(g.num_vertices(), 0);
  std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t i, const Rational& p) {
    if (i == order.size()) {
      law[a] += p;
      return;
    }
    const Vertex v = order[i];
    std::vector<Color> avail;
    for (Color c : lists[v]) {
      bool used = false;
      for (Vertex w : g.neighbors(v)) used = used || a[w] == c;
      if (!used) avail.push_back(c);
    }
    for (Color c : avail) {
      a[v] = c;
      walk(i + 1, p / static_cast<int>(avail.size()));
      a[v] = 0;
    }
  };
  walk(0, Rational(1));
  return law;
}

/// Law of random-greedy: uniform uncolored vertex, then uniform color of
/// [D+1] outside its colored neighborhood.
inline Distribution random_greedy_law(const Graph& g) {
  const Color palette = static_cast<Color>(g.max_degree() + 1);
  Distribution law;
  Assignment a(g.num_vertices(), 0);
  std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t left, const Rational& p) {
    if (left == 0) {
      law[a] += p;
      return;
    }
    for (Vertex v = 0; v < a.size(); ++v) {
      if (a[v] != 0) continue;
      std::vector<Color> avail;
      for (Color c = 1; c <= palette; ++c) {
        bool used = false;
        for (Vertex w : g.neighbors(v)) used = used || a[w] == c;
        if (!used) avail.push_back(c);
      }
      for (Color c : avail) {
        a[v] = c;
        walk(left - 1, p / static_cast<int>(left) / static_cast<int>(avail.size()));
        a[v] = 0;
      }
    }
  };
  walk(g.num_vertices(), Rational(1));
  return law;
}

/// T straight from the definition.
inline std::set<Vertex> t_set(const Graph& g, const std::vector<Color>& tau) {
  std::set<Vertex> t;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    bool clash = false;
    for (Vertex w = 0; w < g.num_vertices(); ++w) clash = clash || (w != v && g.has_edge(v, w) && tau[w] == tau[v]);
    if (!clash) t.insert(v);
  }
  return t;
}

/// |P_v| straight from the definition, with explicit neighborhood unions.
inline std::size_t pairs_at(const Graph& g, const std::vector<Color>& tau, Vertex v) {
  std::vector<Vertex> nv(g.neighbors(v).begin(), g.neighbors(v).end());
  std::size_t count = 0;
  for (std::size_t i = 0; i < nv.size(); ++i) {
    for (std::size_t j = i + 1; j < nv.size(); ++j) {
      const Vertex u = nv[i];
      const Vertex w = nv[j];
      if (g.has_edge(u, w) || tau[u] != tau[w]) continue;
      std::set<Vertex> zone(nv.begin(), nv.end());
      for (Vertex x : g.neighbors(u)) zone.insert(x);
      for (Vertex x : g.neighbors(w)) zone.insert(x);
      zone.erase(u);
      zone.erase(w);
      bool alone = true;
      for (Vertex z : zone) alone = alone && tau[z] != tau[u];
      if (alone) ++count;
    }
  }
  return count;
}

/// Maximum matching size by exhaustive search over used right vertices.
inline std::size_t max_matching_size(const spreadcol::Bigraph& b) {
  std::map<std::pair<std::size_t, std::uint64_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::uint64_t)> best = [&](std::size_t x, std::uint64_t used) -> std::size_t {
    if (x == b.num_x()) return 0;
    const auto key = std::make_pair(x, used);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t r = best(x + 1, used);
    for (auto y : b.x_neighbors(static_cast<spreadcol::Bigraph::Side>(x))) {
      if (!(used >> y & 1)) r = std::max(r, 1 + best(x + 1, used | (std::uint64_t{1} << y)));
    }
    memo[key] = r;
    return r;
  };
  return best(0, 0);
}

inline Rational weight(std::uint32_t mask, const std::vector<Rational>& q) {
  Rational w = 1;
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (mask >> x & 1) w *= q[x];
  }
  return w;
}

/// q-cost by enumerating every choice A -> B_A ⊆ A over the edges of F; the
/// chosen sets form a cover and every minimal cover arises this way.
inline Rational cost_by_choices(const std::vector<std::uint32_t>& edges, const std::vector<Rational>& q) {
  std::vector<std::vector<std::uint32_t>> subs;
  for (auto a : edges) {
    std::vector<std::uint32_t> s;
    for (std::uint32_t b = 0; b <= a; ++b) {
      if ((b & a) == b) s.push_back(b);
    }
    subs.push_back(std::move(s));
  }
  Rational best = -1;
  std::vector<std::size_t> idx(edges.size(), 0);
  while (true) {
    std::set<std::uint32_t> cover;
    for (std::size_t i = 0; i < edges.size(); ++i) cover.insert(subs[i][idx[i]]);
    Rational e = 0;
    for (auto b : cover) e += weight(b, q);
    if (best < 0 || e < best) best = e;
    std::size_t i = 0;
    while (i < edges.size() && ++idx[i] == subs[i].size()) idx[i++] = 0;
    if (i == edges.size()) break;
  }
  return edges.empty() ? Rational(0) : best;
}

/// q-cost over every family of subsets of a ground set of at most 4 elements.
inline Rational cost_by_families(const std::vector<std::uint32_t>& edges, const std::vector<Rational>& q) {
  const std::uint32_t subsets = 1u << q.size();
  Rational best = -1;
  for (std::uint64_t family = 0; family < (std::uint64_t{1} << subsets); ++family) {
    bool covers = true;
    for (auto a : edges) {
      bool hit = false;
      for (std::uint32_t b = 0; b < subsets && !hit; ++b) hit = (family >> b & 1) && (a & b) == b;
      covers = covers && hit;
    }
    if (!covers) continue;
    Rational e = 0;
    for (std::uint32_t b = 0; b < subsets; ++b) {
      if (family >> b & 1) e += weight(b, q);
    }
    if (best < 0 || e < best) best = e;
  }
  return best;
}

/// max over nonempty T ⊆ ground of P(S ⊇ T)^{1/|T|} as (containment, |T|),
/// summing outcome masses directly for every T.
struct SpreadPoint {
  Rational containment = 0;
  unsigned size = 0;
};

inline bool spread_below(const SpreadPoint& a, const SpreadPoint& b) {
  if (b.size == 0 || b.containment == 0) return false;
  if (a.size == 0 || a.containment == 0) return true;
  Rational lhs = 1;
  Rational rhs = 1;
  for (unsigned i = 0; i < b.size; ++i) lhs *= a.containment;
  for (unsigned i = 0; i < a.size; ++i) rhs *= b.containment;
  return lhs < rhs;
}

inline SpreadPoint spread_of(std::uint32_t ground, const std::vector<std::pair<std::uint32_t, Rational>>& outcomes) {
  SpreadPoint best;
  for (std::uint32_t t = ground; t != 0; t = (t - 1) & ground) {
    Rational p = 0;
    for (const auto& [mask, prob] : outcomes) {
      if ((mask & t) == t) p += prob;
    }
    const SpreadPoint cand{p, static_cast<unsigned>(std::popcount(t))};
    if (spread_below(best, cand)) best = cand;
  }
  return best;
}

}  // namespace oracle
