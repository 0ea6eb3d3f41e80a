#include "spreadcol/sparse_phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spreadcol/errors.hpp"
#include "spreadcol/greedy.hpp"

namespace spreadcol {

namespace {

const double kInvE = std::exp(-1.0);

std::size_t count_t_neighbors(const Graph& g, const std::vector<bool>& in_t, Vertex v) {
  std::size_t count = 0;
  for (Vertex w : g.neighbors(v)) count += in_t[w] ? 1 : 0;
  return count;
}

bool outside_window(std::size_t t_neighbors, double d, double window) {
  return std::abs(static_cast<double>(t_neighbors) - kInvE * d) / d > window;
}

bool is_bad(const Graph& g, std::span<const Color> tau, const std::vector<bool>& in_t, Vertex v,
            const BadEventThresholds& thresholds, std::size_t* t_out = nullptr, std::size_t* p_out = nullptr) {
  const auto d = static_cast<double>(g.degree(v));
  const std::size_t t = count_t_neighbors(g, in_t, v);
  if (t_out) *t_out = t;
  const bool window_bad = outside_window(t, d, thresholds.window);
  if (window_bad && !p_out) return true;
  // The pair count is only needed when the floor can bind or the caller wants it.
  std::size_t pairs = 0;
  if (p_out || thresholds.pair_floor > 0.0) pairs = count_isolated_pairs(g, tau, v);
  if (p_out) *p_out = pairs;
  return window_bad || static_cast<double>(pairs) < thresholds.pair_floor * d;
}

void draw_labels(std::span<const Vertex> vertices, Color palette, Rng& rng, Labeling& tau) {
  for (Vertex v : vertices) tau[v] = static_cast<Color>(1 + rng.uniform(palette));
}

void update_t(const Graph& g, std::span<const Color> tau, std::span<const Vertex> vertices,
              std::vector<bool>& in_t) {
  for (Vertex v : vertices) {
    const auto nbrs = g.neighbors(v);
    in_t[v] = std::none_of(nbrs.begin(), nbrs.end(), [&](Vertex w) { return tau[w] == tau[v]; });
  }
}

struct ComponentLayout {
  std::vector<std::vector<Vertex>> components;
  std::vector<std::vector<Vertex>> vstar_by_component;
};

ComponentLayout layout(const Graph& g, std::span<const Vertex> vstar) {
  ComponentLayout out;
  out.components = connected_components(g);
  std::vector<std::size_t> comp_of(g.num_vertices());
  for (std::size_t c = 0; c < out.components.size(); ++c) {
    for (Vertex v : out.components[c]) comp_of[v] = c;
  }
  out.vstar_by_component.resize(out.components.size());
  for (Vertex v : vstar) {
    if (v >= g.num_vertices()) throw std::invalid_argument("V* contains invalid vertex " + std::to_string(v));
    out.vstar_by_component[comp_of[v]].push_back(v);
  }
  for (auto& list : out.vstar_by_component) std::sort(list.begin(), list.end());
  return out;
}

ConditionedLabeling conditioned_from_master(const Graph& g, const ComponentLayout& lay,
                                            const BadEventThresholds& thresholds, std::uint64_t master,
                                            std::size_t max_tries) {
  const auto palette = static_cast<Color>(g.max_degree() + 1);
  ConditionedLabeling out;
  out.tau.assign(g.num_vertices(), 0);
  std::vector<bool> in_t(g.num_vertices(), false);
  for (std::size_t c = 0; c < lay.components.size(); ++c) {
    const auto& comp = lay.components[c];
    const auto& targets = lay.vstar_by_component[c];
    Rng rng(derive_seed(master, 2 * c));
    if (targets.empty()) {
      draw_labels(comp, palette, rng, out.tau);
      continue;
    }
    bool accepted = false;
    for (std::size_t attempt = 1; attempt <= max_tries; ++attempt) {
      draw_labels(comp, palette, rng, out.tau);
      update_t(g, out.tau, comp, in_t);
      const bool any_bad = std::any_of(targets.begin(), targets.end(), [&](Vertex v) {
        return is_bad(g, out.tau, in_t, v, thresholds);
      });
      if (!any_bad) {
        out.attempts.push_back(attempt);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw MaxTriesExceeded("conditioned labeling: component " + std::to_string(c) + " rejected " +
                             std::to_string(max_tries) + " labelings (window " +
                             std::to_string(thresholds.window) + ", pair floor " +
                             std::to_string(thresholds.pair_floor) + ")");
    }
  }
  return out;
}

}  // namespace

std::size_t LabelingStats::num_bad() const {
  return static_cast<std::size_t>(std::count(bad.begin(), bad.end(), true));
}

std::vector<Vertex> LabelingStats::t_set() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < in_t.size(); ++v) {
    if (in_t[v]) out.push_back(v);
  }
  return out;
}

Labeling uniform_labeling(std::size_t n, Color palette_size, Rng& rng) {
  Labeling tau(n);
  for (auto& label : tau) label = static_cast<Color>(1 + rng.uniform(palette_size));
  return tau;
}

std::vector<bool> compute_t(const Graph& g, std::span<const Color> tau) {
  if (tau.size() != g.num_vertices()) throw std::invalid_argument("labeling has the wrong size");
  std::vector<bool> in_t(g.num_vertices());
  std::vector<Vertex> all(g.num_vertices());
  for (Vertex v = 0; v < all.size(); ++v) all[v] = v;
  update_t(g, tau, all, in_t);
  return in_t;
}

std::size_t count_isolated_pairs(const Graph& g, std::span<const Color> tau, Vertex v) {
  // A label shared by three or more vertices of N_v can never form a pair,
  // so only label classes of size exactly two in N_v are candidates.
  const auto nv = g.neighbors(v);
  std::vector<std::pair<Color, Vertex>> by_label;
  by_label.reserve(nv.size());
  for (Vertex u : nv) by_label.emplace_back(tau[u], u);
  std::sort(by_label.begin(), by_label.end());

  std::size_t count = 0;
  for (std::size_t i = 0; i < by_label.size();) {
    std::size_t j = i;
    while (j < by_label.size() && by_label[j].first == by_label[i].first) ++j;
    if (j - i == 2) {
      const Color label = by_label[i].first;
      const Vertex u = by_label[i].second;
      const Vertex w = by_label[i + 1].second;
      if (!g.has_edge(u, w)) {
        auto clash = [&](Vertex x) {
          for (Vertex z : g.neighbors(x)) {
            if (z != u && z != w && tau[z] == label) return true;
          }
          return false;
        };
        if (!clash(u) && !clash(w)) ++count;
      }
    }
    i = j;
  }
  return count;
}

LabelingStats label_statistics(const Graph& g, std::span<const Color> tau, std::span<const Vertex> vstar,
                               const BadEventThresholds& thresholds) {
  LabelingStats stats;
  stats.in_t = compute_t(g, tau);
  stats.vertices.assign(vstar.begin(), vstar.end());
  for (Vertex v : vstar) {
    std::size_t t = 0;
    std::size_t p = 0;
    const bool bad = is_bad(g, tau, stats.in_t, v, thresholds, &t, &p);
    stats.t_neighbors.push_back(t);
    stats.pair_count.push_back(p);
    stats.bad.push_back(bad);
  }
  return stats;
}

LabelingStats label_statistics(const Graph& g, std::span<const Color> tau, std::span<const Vertex> vstar,
                               double theta_prime) {
  return label_statistics(g, tau, vstar, BadEventThresholds::coupled(theta_prime));
}

std::size_t ConditionedLabeling::total_attempts() const {
  std::size_t total = 0;
  for (auto a : attempts) total += a;
  return total;
}

ConditionedLabeling sample_conditioned_labeling(const Graph& g, std::span<const Vertex> vstar,
                                                const BadEventThresholds& thresholds, Rng& rng,
                                                std::size_t max_tries) {
  const auto lay = layout(g, vstar);
  return conditioned_from_master(g, lay, thresholds, rng.next(), max_tries);
}

double calibrate_window(const Graph& g, std::span<const Vertex> vstar, double pair_floor,
                        double target_acceptance, std::size_t samples, Rng& rng) {
  if (!(target_acceptance > 0.0 && target_acceptance <= 1.0) || samples == 0) {
    throw std::invalid_argument("calibrate_window: need 0 < target_acceptance <= 1 and samples > 0");
  }
  if (vstar.empty()) return 0.0;
  const auto palette = static_cast<Color>(g.max_degree() + 1);
  std::vector<double> needed;
  needed.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto tau = uniform_labeling(g.num_vertices(), palette, rng);
    const auto in_t = compute_t(g, tau);
    double worst = 0.0;
    for (Vertex v : vstar) {
      const auto d = static_cast<double>(g.degree(v));
      const auto t = static_cast<double>(count_t_neighbors(g, in_t, v));
      worst = std::max(worst, std::abs(t - kInvE * d) / d);
      if (pair_floor > 0.0 && static_cast<double>(count_isolated_pairs(g, tau, v)) < pair_floor * d) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
    }
    needed.push_back(worst);
  }
  std::sort(needed.begin(), needed.end());
  const auto rank = static_cast<std::size_t>(std::ceil(target_acceptance * static_cast<double>(samples)));
  return needed[std::clamp<std::size_t>(rank, 1, samples) - 1];
}

SparsePhaseResult sparse_phase_color(const Graph& g, const Decomposition& dec, Rng& rng,
                                     const SparsePhaseParams& params) {
  if (!g.is_regular()) throw std::invalid_argument("sparse_phase_color needs a regular graph");
  const std::size_t n = g.num_vertices();
  const auto d = static_cast<double>(g.max_degree());
  const auto palette = static_cast<Color>(g.max_degree() + 1);
  const auto& thr = params.thresholds;

  SparsePhaseResult result;
  result.coloring = PartialColoring(n);
  result.min_list_fraction = std::numeric_limits<double>::infinity();
  if (dec.sparse.empty()) return result;

  const auto lay = layout(g, dec.sparse);
  const std::uint64_t master = rng.next();
  const auto cond = conditioned_from_master(g, lay, thr, master, params.max_tries);
  result.attempts = cond.attempts;

  const auto in_t = compute_t(g, cond.tau);
  PartialColoring sigma(n);
  for (Vertex v = 0; v < n; ++v) {
    if (in_t[v]) sigma.assign(v, cond.tau[v]);
  }
  if (!sigma.is_proper(g)) throw InvariantViolated("labels restricted to T are not a proper coloring");
  result.t_size = sigma.domain_size();

  const double degree_cap = (1.0 - kInvE + thr.window) * d;
  const double list_floor = d + 1.0 - (kInvE + thr.window) * d + thr.pair_floor * d;
  constexpr double kSlack = 1e-9;

  std::vector<bool> used(palette + 1);
  for (std::size_t c = 0; c < lay.components.size(); ++c) {
    std::vector<Vertex> rest;
    for (Vertex v : lay.vstar_by_component[c]) {
      if (!in_t[v]) rest.push_back(v);
    }
    if (rest.empty()) continue;
    const Graph residual = induced_subgraph(g, rest);
    std::vector<std::vector<Color>> lists(rest.size());
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const Vertex v = rest[i];
      std::fill(used.begin(), used.end(), false);
      for (Vertex w : g.neighbors(v)) {
        if (in_t[w]) used[cond.tau[w]] = true;
      }
      for (Color col = 1; col <= palette; ++col) {
        if (!used[col]) lists[i].push_back(col);
      }
      const auto residual_degree = static_cast<double>(residual.degree(static_cast<Vertex>(i)));
      const auto list_size = static_cast<double>(lists[i].size());
      if (residual_degree > degree_cap + kSlack) {
        throw InvariantViolated("hand-off degree " + std::to_string(residual_degree) + " of vertex " +
                                std::to_string(v) + " exceeds " + std::to_string(degree_cap));
      }
      if (list_size < list_floor - kSlack) {
        throw InvariantViolated("hand-off list of vertex " + std::to_string(v) + " has " +
                                std::to_string(list_size) + " colors, below " + std::to_string(list_floor));
      }
      result.min_list_fraction = std::min(result.min_list_fraction, list_size / d);
      result.max_residual_degree_fraction = std::max(result.max_residual_degree_fraction, residual_degree / d);
    }
    result.handoff_size += rest.size();
    Rng greedy_rng(derive_seed(master, 2 * c + 1));
    const auto local = slack_greedy_sample(residual, ListAssignment(std::move(lists)), greedy_rng);
    for (std::size_t i = 0; i < rest.size(); ++i) sigma.assign(rest[i], local[static_cast<Vertex>(i)]);
  }

  for (Vertex v : dec.sparse) result.coloring.assign(v, sigma[v]);
  if (!result.coloring.is_proper(g)) throw InvariantViolated("sparse phase produced an improper coloring");
  return result;
}

void to_json(nlohmann::json& j, const LabelingStats& stats) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < stats.vertices.size(); ++i) {
    rows.push_back({{"v", stats.vertices[i]},
                    {"t_neighbors", stats.t_neighbors[i]},
                    {"pairs", stats.pair_count[i]},
                    {"bad", static_cast<bool>(stats.bad[i])}});
  }
  j = nlohmann::json{{"t", stats.t_set()}, {"vertices", std::move(rows)}, {"num_bad", stats.num_bad()}};
}

}  // namespace spreadcol
