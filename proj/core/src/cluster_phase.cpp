#include "spreadcol/cluster_phase.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spreadcol/errors.hpp"
#include "spreadcol/greedy.hpp"

namespace spreadcol {

namespace {

constexpr double kTol = 1e-9;
constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

std::string fmt(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::string_view to_string(ClusterPath path) { return path == ClusterPath::Small ? "small" : "large"; }

ClusterContext build_cluster_context(const Graph& g, std::span<const Vertex> cluster,
                                     const PartialColoring& sigma_out, const ClusterParams& params) {
  if (!g.is_regular()) throw std::invalid_argument("cluster coloring needs a regular graph");
  if (sigma_out.num_vertices() != g.num_vertices()) throw std::invalid_argument("sigma_out has the wrong size");
  if (!(params.eps > 0.0)) throw std::invalid_argument("cluster eps must be positive");
  if (cluster.empty()) throw std::invalid_argument("empty cluster");

  ClusterContext ctx;
  ctx.cluster.assign(cluster.begin(), cluster.end());
  std::sort(ctx.cluster.begin(), ctx.cluster.end());
  if (std::adjacent_find(ctx.cluster.begin(), ctx.cluster.end()) != ctx.cluster.end()) {
    throw std::invalid_argument("cluster lists a vertex twice");
  }
  if (ctx.cluster.back() >= g.num_vertices()) throw std::invalid_argument("cluster vertex out of range");

  const std::size_t size = ctx.cluster.size();
  ctx.degree = g.max_degree();
  ctx.eps = params.eps;
  const auto d = static_cast<double>(ctx.degree);
  if (ctx.degree == 0) throw std::invalid_argument("cluster coloring needs D >= 1");

  std::vector<std::size_t> local(g.num_vertices(), kNoIndex);
  for (std::size_t i = 0; i < size; ++i) local[ctx.cluster[i]] = i;

  std::vector<Edge> h_edges;
  for (std::size_t i = 0; i < size; ++i) {
    const Vertex v = ctx.cluster[i];
    if (sigma_out.is_colored(v)) {
      throw HypothesisViolated("sigma_out already colors cluster vertex " + std::to_string(v));
    }
    std::size_t inside = 0;
    for (Vertex w : g.neighbors(v)) inside += local[w] != kNoIndex ? 1 : 0;
    const std::size_t outside = g.degree(v) - inside;
    const std::size_t non_neighbors = size - 1 - inside;
    if (static_cast<double>(outside) >= params.eps * d || static_cast<double>(non_neighbors) >= params.eps * d) {
      throw HypothesisViolated("vertex " + std::to_string(v) + " breaks the cluster conditions: |N_v \\ C| = " +
                               std::to_string(outside) + ", |C \\ N_v| = " + std::to_string(non_neighbors) +
                               ", eps D = " + fmt(params.eps * d));
    }
    for (std::size_t j = i + 1; j < size; ++j) {
      if (!g.has_edge(v, ctx.cluster[j])) h_edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    }
  }
  ctx.h = Graph(size, h_edges);
  ctx.zeta = static_cast<double>(ctx.h.num_edges()) / (d * d);
  ctx.zeta0 = params.zeta0_override.value_or(std::sqrt(params.eps) / d);
  ctx.sigma_out = sigma_out;

  const std::size_t palette = ctx.degree + 1;
  std::vector<Bigraph::BiEdge> b_edges;
  std::vector<bool> used(palette);
  for (std::size_t i = 0; i < size; ++i) {
    std::fill(used.begin(), used.end(), false);
    for (Vertex w : g.neighbors(ctx.cluster[i])) {
      const Color c = sigma_out[w];
      if (c != PartialColoring::kNoColor && c >= 1 && c <= palette) used[c - 1] = true;
    }
    for (std::size_t y = 0; y < palette; ++y) {
      if (!used[y]) b_edges.emplace_back(static_cast<Bigraph::Side>(i), static_cast<Bigraph::Side>(y));
    }
  }
  ctx.b = Bigraph(size, palette, b_edges);

  if (ctx.zeta >= ctx.zeta0) {
    ctx.path = ClusterPath::Large;
    const double lower = std::max(1.0 / d, ctx.zeta);
    const double upper = std::min(ctx.zeta / params.eps, 1.0);
    const double raw = params.eta_override.value_or(std::sqrt(lower * upper));
    ctx.eta_d = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(raw * d)));
    ctx.eta = static_cast<double>(ctx.eta_d) / d;
    if (ctx.eta < lower * params.h_margin - kTol || ctx.eta > upper / params.h_margin + kTol) {
      throw HypothesisViolated("eta = " + fmt(ctx.eta) + " is outside [" + fmt(lower * params.h_margin) + ", " +
                               fmt(upper / params.h_margin) + "] (zeta = " + fmt(ctx.zeta) + ")");
    }
  }
  return ctx;
}

ProcessResult process_pair_coloring(const ClusterContext& ctx, Rng& rng) {
  if (ctx.path != ClusterPath::Large || ctx.eta_d == 0) {
    throw std::invalid_argument("the pair Process runs only on the large-zeta path");
  }
  const std::size_t size = ctx.cluster.size();
  const std::size_t palette = ctx.degree + 1;
  const auto d = static_cast<double>(ctx.degree);
  const double edge_floor = (ctx.zeta - 2.0 * ctx.eta * ctx.eps) * d * d;
  const double color_floor = (1.0 - 2.0 * ctx.eps - ctx.eta) * d;

  ProcessResult out;
  out.pi = PartialColoring(ctx.sigma_out.num_vertices());
  std::vector<bool> vertex_alive(size, true);
  std::vector<bool> color_alive(palette, true);
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<Bigraph::Side> common;

  auto common_colors = [&](Vertex u, Vertex v) {
    common.clear();
    const auto a = ctx.b.x_neighbors(u);
    const auto b = ctx.b.x_neighbors(v);
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    std::erase_if(common, [&](Bigraph::Side y) { return !color_alive[y]; });
    return common.size();
  };

  for (std::size_t round = 1; round <= ctx.eta_d; ++round) {
    edges.clear();
    std::size_t min_common = std::numeric_limits<std::size_t>::max();
    for (Vertex u = 0; u < size; ++u) {
      if (!vertex_alive[u]) continue;
      for (Vertex v : ctx.h.neighbors(u)) {
        if (v > u && vertex_alive[v]) {
          edges.emplace_back(u, v);
          min_common = std::min(min_common, common_colors(u, v));
        }
      }
    }
    out.edge_counts.push_back(edges.size());
    out.common_colors.push_back(edges.empty() ? 0 : min_common);
    if (static_cast<double>(edges.size()) <= edge_floor - kTol) {
      throw InvariantViolated("Process round " + std::to_string(round) + ": e(H_{i-1}) = " +
                              std::to_string(edges.size()) + " is not above (zeta - 2 eta eps) D^2 = " +
                              fmt(edge_floor));
    }
    if (edges.empty()) {
      throw EmptyChoiceSet("Process round " + std::to_string(round) + ": H_{i-1} has no edges");
    }
    if (static_cast<double>(min_common) <= color_floor - kTol) {
      throw InvariantViolated("Process round " + std::to_string(round) + ": an H-edge has only " +
                              std::to_string(min_common) + " common colors, not above (1 - 2 eps - eta) D = " +
                              fmt(color_floor));
    }
    const auto [u, v] = edges[rng.uniform(edges.size())];
    if (common_colors(u, v) == 0) {
      throw EmptyChoiceSet("Process round " + std::to_string(round) + ": no common legal color");
    }
    const Bigraph::Side y = common[rng.uniform(common.size())];
    const auto color = static_cast<Color>(y + 1);
    vertex_alive[u] = vertex_alive[v] = false;
    color_alive[y] = false;
    out.pi.assign(ctx.cluster[u], color);
    out.pi.assign(ctx.cluster[v], color);
    out.pairs.emplace_back(ctx.cluster[u], ctx.cluster[v]);
    out.colors.push_back(color);
  }
  return out;
}

namespace {

void check_cluster_coloring(const ClusterContext& ctx, const PartialColoring& coloring) {
  const std::size_t size = ctx.cluster.size();
  std::vector<std::vector<Vertex>> by_color(ctx.degree + 2);
  for (Vertex i = 0; i < size; ++i) {
    const Color c = coloring[ctx.cluster[i]];
    if (c == PartialColoring::kNoColor || c == 0 || c > ctx.degree + 1) {
      throw InvariantViolated("cluster vertex " + std::to_string(ctx.cluster[i]) + " left without a palette color");
    }
    if (!ctx.b.has_edge(i, c - 1)) {
      throw InvariantViolated("cluster vertex " + std::to_string(ctx.cluster[i]) + " got a color used on its neighborhood");
    }
    by_color[c].push_back(i);
  }
  for (const auto& group : by_color) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        if (!ctx.h.has_edge(group[a], group[b])) {
          throw InvariantViolated("adjacent cluster vertices " + std::to_string(ctx.cluster[group[a]]) + " and " +
                                  std::to_string(ctx.cluster[group[b]]) + " share a color");
        }
      }
    }
  }
}

}  // namespace

ClusterColoringResult color_cluster(const ClusterContext& ctx, Rng& rng, const ClusterParams& params) {
  const std::size_t size = ctx.cluster.size();
  const auto d = static_cast<double>(ctx.degree);
  const std::size_t palette = ctx.degree + 1;

  ClusterColoringResult out;
  out.path = ctx.path;
  out.coloring = PartialColoring(ctx.sigma_out.num_vertices());
  XPerfectParams xp;
  xp.dense = params.dense;

  if (ctx.path == ClusterPath::Small) {
    out.z = 3.0 * (ctx.eps + ctx.zeta * d);
    out.j = size;
    out.r_cap = static_cast<std::int64_t>(palette) - static_cast<std::int64_t>(size);
    std::vector<std::int64_t> r(size);
    for (Vertex i = 0; i < size; ++i) r[i] = static_cast<std::int64_t>(ctx.h.degree(i));
    xp.r = std::move(r);
    auto m = spread_X_perfect_matching(ctx.b, out.z, rng, xp);
    for (auto [x, y] : m.matching.edges()) out.coloring.assign(ctx.cluster[x], static_cast<Color>(y + 1));
    out.matching = std::move(m.stats);
  } else {
    const auto proc = process_pair_coloring(ctx, rng);
    out.process_rounds = proc.pairs.size();
    std::vector<Bigraph::Side> rest;
    for (Vertex i = 0; i < size; ++i) {
      if (!proc.pi.is_colored(ctx.cluster[i])) rest.push_back(i);
      else out.coloring.assign(ctx.cluster[i], proc.pi[ctx.cluster[i]]);
    }
    std::vector<bool> taken(palette, false);
    for (Color c : proc.colors) taken[c - 1] = true;
    std::vector<Bigraph::Side> free_colors;
    for (Bigraph::Side y = 0; y < palette; ++y) {
      if (!taken[y]) free_colors.push_back(y);
    }
    out.z = 2.0 * (ctx.eps + ctx.eta);
    out.j = rest.size();
    out.r_cap = static_cast<std::int64_t>(free_colors.size()) - static_cast<std::int64_t>(rest.size());
    std::vector<std::int64_t> r(rest.size());
    for (std::size_t k = 0; k < rest.size(); ++k) {
      r[k] = static_cast<std::int64_t>(ctx.h.degree(rest[k])) - static_cast<std::int64_t>(ctx.eta_d);
    }
    xp.r = std::move(r);
    const Bigraph sub = ctx.b.induced(rest, free_colors);
    auto m = spread_X_perfect_matching(sub, out.z, rng, xp);
    for (auto [x, y] : m.matching.edges()) {
      out.coloring.assign(ctx.cluster[rest[x]], static_cast<Color>(free_colors[y] + 1));
    }
    out.matching = std::move(m.stats);
  }
  check_cluster_coloring(ctx, out.coloring);
  return out;
}

void greedy_complete(const Graph& g, std::span<const Vertex> vertices, PartialColoring& sigma) {
  const std::size_t palette = g.max_degree() + 1;
  std::vector<bool> used(palette + 1);
  for (Vertex v : vertices) {
    if (sigma.is_colored(v)) continue;
    std::fill(used.begin(), used.end(), false);
    for (Vertex w : g.neighbors(v)) {
      const Color c = sigma[w];
      if (c != PartialColoring::kNoColor && c <= palette) used[c] = true;
    }
    Color pick = 0;
    for (Color c = 1; c <= palette && pick == 0; ++c) {
      if (!used[c]) pick = c;
    }
    if (pick == 0) throw StuckVertex("greedy completion found no free color at vertex " + std::to_string(v));
    sigma.assign(v, pick);
  }
}

PreparedPipeline::PreparedPipeline(const Graph& g, const PipelineParams& params) : params_(params), original_(g) {
  degree_ = g.max_degree();
  if (degree_ < params.d_min) {
    throw std::invalid_argument("pipeline needs max degree >= " + std::to_string(params.d_min) + ", got " +
                                std::to_string(degree_));
  }
  regular_ = regularize(g);
  try {
    decomposition_ = sparse_dense_decompose(regular_, params.eps_in, params.decompose);
  } catch (const VerificationFailed& e) {
    decomposition_error_ = e.what();
    return;
  }
  thresholds_.pair_floor = params.pair_floor;
  if (params.window) {
    thresholds_.window = *params.window;
  } else if (!decomposition_->sparse.empty()) {
    Rng rng(params.calibration_seed);
    thresholds_.window = calibrate_window(regular_, decomposition_->sparse, params.pair_floor,
                                          params.calibration_acceptance, params.calibration_samples, rng);
  }
}

PipelineResult PreparedPipeline::sample(Rng& rng) const {
  PipelineResult result;
  PartialColoring sigma(regular_.num_vertices());
  auto fall_back = [&](std::string flag) {
    result.spread_guarantee = false;
    result.flags.push_back(std::move(flag));
  };

  if (!decomposition_) {
    fall_back("no-spread-guarantee: decomposition: " + decomposition_error_);
    std::vector<Vertex> all(regular_.num_vertices());
    for (Vertex v = 0; v < all.size(); ++v) all[v] = v;
    greedy_complete(regular_, all, sigma);
  } else {
    const auto& dec = *decomposition_;
    if (!dec.sparse.empty()) {
      bool done = false;
      if (!std::isfinite(thresholds_.window)) {
        fall_back("no-spread-guarantee: sparse phase: calibration found no feasible window");
      } else {
        try {
          auto sparse = sparse_phase_color(regular_, dec, rng, SparsePhaseParams{thresholds_, params_.max_tries});
          for (Vertex v : dec.sparse) sigma.assign(v, sparse.coloring[v]);
          result.sparse_attempts = std::accumulate(sparse.attempts.begin(), sparse.attempts.end(), std::size_t{0});
          result.t_size = sparse.t_size;
          done = true;
        } catch (const MaxTriesExceeded& e) {
          fall_back(std::string("no-spread-guarantee: sparse phase: ") + e.what());
        } catch (const HypothesisViolated& e) {
          fall_back(std::string("no-spread-guarantee: sparse phase: ") + e.what());
        }
      }
      if (!done) greedy_complete(regular_, dec.sparse, sigma);
    }

    ClusterParams cp = params_.cluster;
    cp.eps = dec.eps;
    for (std::size_t c = 0; c < dec.clusters.size(); ++c) {
      const auto& cluster = dec.clusters[c];
      ClusterReport report{c, cluster.size(), 0.0, "", ""};
      try {
        const auto ctx = build_cluster_context(regular_, cluster, sigma, cp);
        report.zeta = ctx.zeta;
        const auto colored = color_cluster(ctx, rng, cp);
        for (Vertex v : cluster) sigma.assign(v, colored.coloring[v]);
        report.path = std::string(to_string(colored.path));
      } catch (const HypothesisViolated& e) {
        report.reason = e.what();
      } catch (const MaxTriesExceeded& e) {
        report.reason = e.what();
      } catch (const VerificationFailed& e) {
        report.reason = e.what();
      }
      if (report.path.empty()) {
        report.path = "fallback";
        fall_back("no-spread-guarantee: cluster " + std::to_string(c) + ": " + report.reason);
        std::vector<Vertex> sorted(cluster.begin(), cluster.end());
        std::sort(sorted.begin(), sorted.end());
        greedy_complete(regular_, sorted, sigma);
      }
      result.clusters.push_back(std::move(report));
    }
  }

  if (!sigma.is_total() || !sigma.is_proper(regular_)) {
    throw InvariantViolated("pipeline produced an incomplete or improper coloring");
  }
  result.coloring = PartialColoring(original_.num_vertices());
  for (Vertex v = 0; v < original_.num_vertices(); ++v) {
    if (sigma[v] < 1 || sigma[v] > degree_ + 1) throw InvariantViolated("pipeline color outside the palette");
    result.coloring.assign(v, sigma[v]);
  }
  if (!result.coloring.is_proper(original_)) throw InvariantViolated("restricted coloring is improper");
  return result;
}

nlohmann::json PreparedPipeline::parameters() const {
  nlohmann::json j{{"n", original_.num_vertices()},
                   {"D", degree_},
                   {"regularized_n", regular_.num_vertices()},
                   {"eps_in", params_.eps_in},
                   {"window", std::isfinite(thresholds_.window) ? nlohmann::json(thresholds_.window) : nlohmann::json()},
                   {"pair_floor", thresholds_.pair_floor},
                   {"h_margin", params_.cluster.h_margin},
                   {"max_tries", params_.max_tries}};
  if (decomposition_) {
    j["eps"] = decomposition_->eps;
    j["theta"] = decomposition_->theta;
    j["sparse"] = decomposition_->sparse.size();
    j["clusters"] = decomposition_->clusters.size();
  } else {
    j["decomposition_error"] = decomposition_error_;
  }
  return j;
}

PipelineResult color_graph_spread(const Graph& g, Rng& rng, const PipelineParams& params) {
  return PreparedPipeline(g, params).sample(rng);
}

void to_json(nlohmann::json& j, const PipelineResult& result) {
  nlohmann::json coloring = nlohmann::json::object();
  for (auto [v, c] : result.coloring.assignments()) coloring[std::to_string(v)] = c;
  auto clusters = nlohmann::json::array();
  for (const auto& c : result.clusters) {
    clusters.push_back({{"index", c.index}, {"size", c.size}, {"zeta", c.zeta}, {"path", c.path}, {"reason", c.reason}});
  }
  j = nlohmann::json{{"coloring", std::move(coloring)},
                     {"flags", result.flags},
                     {"spread_guarantee", result.spread_guarantee},
                     {"clusters", std::move(clusters)},
                     {"sparse_attempts", result.sparse_attempts},
                     {"t_size", result.t_size}};
}

}  // namespace spreadcol
