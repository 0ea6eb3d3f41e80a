#include "spreadcol/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spreadcol/errors.hpp"

namespace spreadcol {

using Side = Bigraph::Side;

Bigraph::Bigraph(std::size_t num_x, std::size_t num_y, std::span<const BiEdge> edges)
    : x_adj_(num_x), y_adj_(num_y) {
  for (auto [x, y] : edges) {
    if (x >= num_x || y >= num_y) {
      throw std::invalid_argument("bigraph edge (" + std::to_string(x) + ", " + std::to_string(y) +
                                  ") out of range");
    }
    x_adj_[x].push_back(y);
  }
  for (Side x = 0; x < num_x; ++x) {
    auto& list = x_adj_[x];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (Side y : list) y_adj_[y].push_back(x);
    num_edges_ += list.size();
  }
}

Bigraph Bigraph::complete(std::size_t num_x, std::size_t num_y) {
  Bigraph b(num_x, num_y);
  std::vector<Side> all_y(num_y);
  std::iota(all_y.begin(), all_y.end(), Side{0});
  std::vector<Side> all_x(num_x);
  std::iota(all_x.begin(), all_x.end(), Side{0});
  for (auto& list : b.x_adj_) list = all_y;
  for (auto& list : b.y_adj_) list = all_x;
  b.num_edges_ = num_x * num_y;
  return b;
}

bool Bigraph::has_edge(Side x, Side y) const {
  const auto& list = x_adj_.at(x);
  return std::binary_search(list.begin(), list.end(), y);
}

std::vector<Bigraph::BiEdge> Bigraph::edges() const {
  std::vector<BiEdge> out;
  out.reserve(num_edges_);
  for (Side x = 0; x < x_adj_.size(); ++x) {
    for (Side y : x_adj_[x]) out.emplace_back(x, y);
  }
  return out;
}

Bigraph Bigraph::induced(std::span<const Side> xs, std::span<const Side> ys) const {
  std::vector<Side> y_index(num_y(), Matching::kUnmatched);
  for (Side i = 0; i < ys.size(); ++i) y_index.at(ys[i]) = i;
  std::vector<BiEdge> kept;
  for (Side i = 0; i < xs.size(); ++i) {
    for (Side y : x_adj_.at(xs[i])) {
      if (y_index[y] != Matching::kUnmatched) kept.emplace_back(i, y_index[y]);
    }
  }
  return Bigraph(xs.size(), ys.size(), kept);
}

void Matching::add(Side x, Side y) {
  if (x_mate_.at(x) != kUnmatched || y_mate_.at(y) != kUnmatched) {
    throw std::logic_error("matching endpoint already used");
  }
  x_mate_[x] = y;
  y_mate_[y] = x;
}

std::size_t Matching::size() const {
  return static_cast<std::size_t>(
      std::count_if(x_mate_.begin(), x_mate_.end(), [](Side y) { return y != kUnmatched; }));
}

bool Matching::covers_x() const {
  return std::none_of(x_mate_.begin(), x_mate_.end(), [](Side y) { return y == kUnmatched; });
}

std::vector<Bigraph::BiEdge> Matching::edges() const {
  std::vector<Bigraph::BiEdge> out;
  for (Side x = 0; x < x_mate_.size(); ++x) {
    if (x_mate_[x] != kUnmatched) out.emplace_back(x, x_mate_[x]);
  }
  return out;
}

bool Matching::valid_in(const Bigraph& b) const {
  if (x_mate_.size() != b.num_x() || y_mate_.size() != b.num_y()) return false;
  for (Side x = 0; x < x_mate_.size(); ++x) {
    const Side y = x_mate_[x];
    if (y == kUnmatched) continue;
    if (y >= y_mate_.size() || y_mate_[y] != x || !b.has_edge(x, y)) return false;
  }
  for (Side y = 0; y < y_mate_.size(); ++y) {
    const Side x = y_mate_[y];
    if (x != kUnmatched && (x >= x_mate_.size() || x_mate_[x] != y)) return false;
  }
  return true;
}

namespace {

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const Bigraph& b)
      : b_(b), x_mate_(b.num_x(), kNil), y_mate_(b.num_y(), kNil), dist_(b.num_x()), next_(b.num_x()) {}

  Matching run() {
    while (layer()) {
      std::fill(next_.begin(), next_.end(), 0);
      for (Side x = 0; x < b_.num_x(); ++x) {
        if (x_mate_[x] == kNil) augment(x);
      }
    }
    Matching m(b_.num_x(), b_.num_y());
    for (Side x = 0; x < b_.num_x(); ++x) {
      if (x_mate_[x] != kNil) m.add(x, x_mate_[x]);
    }
    return m;
  }

 private:
  static constexpr Side kNil = Matching::kUnmatched;
  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

  bool layer() {
    std::vector<Side> queue;
    for (Side x = 0; x < b_.num_x(); ++x) {
      if (x_mate_[x] == kNil) {
        dist_[x] = 0;
        queue.push_back(x);
      } else {
        dist_[x] = kInf;
      }
    }
    bool found = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Side x = queue[head];
      for (Side y : b_.x_neighbors(x)) {
        const Side x2 = y_mate_[y];
        if (x2 == kNil) {
          found = true;
        } else if (dist_[x2] == kInf) {
          dist_[x2] = dist_[x] + 1;
          queue.push_back(x2);
        }
      }
    }
    return found;
  }

  bool augment(Side x) {
    const auto nbrs = b_.x_neighbors(x);
    for (auto& i = next_[x]; i < nbrs.size(); ++i) {
      const Side y = nbrs[i];
      const Side x2 = y_mate_[y];
      if (x2 == kNil || (dist_[x2] == dist_[x] + 1 && augment(x2))) {
        x_mate_[x] = y;
        y_mate_[y] = x;
        return true;
      }
    }
    dist_[x] = kInf;
    return false;
  }

  const Bigraph& b_;
  std::vector<Side> x_mate_;
  std::vector<Side> y_mate_;
  std::vector<std::size_t> dist_;
  std::vector<std::size_t> next_;
};

/// min(k, |list|) distinct uniform entries of `list`, via a partial shuffle of `scratch`.
void choose_distinct(std::span<const Side> list, std::size_t k, Rng& rng, std::vector<Side>& scratch,
                     std::vector<Side>& out) {
  out.clear();
  if (k >= list.size()) {
    out.assign(list.begin(), list.end());
    return;
  }
  scratch.assign(list.begin(), list.end());
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(scratch[i], scratch[i + rng.uniform(scratch.size() - i)]);
    out.push_back(scratch[i]);
  }
}

std::string fmt(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

constexpr double kTol = 1e-9;

}  // namespace

Matching maximum_matching(const Bigraph& b) { return HopcroftKarp(b).run(); }

std::optional<Matching> perfect_matching(const Bigraph& b) {
  auto m = maximum_matching(b);
  if (!m.covers_x()) return std::nullopt;
  return m;
}

Bigraph kout_subgraph(const Bigraph& b, std::size_t k, Rng& rng) {
  if (k == 0) throw std::invalid_argument("kout_subgraph needs k >= 1");
  std::vector<Bigraph::BiEdge> kept;
  std::vector<Side> scratch;
  std::vector<Side> chosen;
  for (Side x = 0; x < b.num_x(); ++x) {
    choose_distinct(b.x_neighbors(x), k, rng, scratch, chosen);
    for (Side y : chosen) kept.emplace_back(x, y);
  }
  for (Side y = 0; y < b.num_y(); ++y) {
    choose_distinct(b.y_neighbors(y), k, rng, scratch, chosen);
    for (Side x : chosen) kept.emplace_back(x, y);
  }
  return Bigraph(b.num_x(), b.num_y(), kept);
}

DenseMatchingResult spread_matching_dense(const Bigraph& f, double lambda, Rng& rng,
                                          const DenseMatchingParams& params) {
  const std::size_t size = f.num_x();
  if (f.num_y() != size) {
    throw HypothesisViolated("dense matching needs |V0| = |V1|, got " + std::to_string(size) + " and " +
                             std::to_string(f.num_y()));
  }
  if (!(lambda <= params.lambda_max + kTol)) {
    throw HypothesisViolated("dense matching: lambda = " + fmt(lambda) + " exceeds lambda_max = " +
                             fmt(params.lambda_max));
  }
  const double floor = (1.0 - lambda) * static_cast<double>(size);
  for (Side v = 0; v < size; ++v) {
    if (static_cast<double>(f.x_degree(v)) < floor - kTol || static_cast<double>(f.y_degree(v)) < floor - kTol) {
      throw HypothesisViolated("dense matching: a degree falls below (1 - lambda) I = " + fmt(floor));
    }
  }
  if (params.k == 0 || params.block == 0) throw std::invalid_argument("dense matching needs k >= 1 and block >= 1");

  DenseMatchingResult result;
  std::size_t k = params.k;
  for (std::size_t attempt = 1; attempt <= params.max_tries; ++attempt) {
    auto m = perfect_matching(kout_subgraph(f, k, rng));
    if (m) {
      result.matching = std::move(*m);
      result.attempts = attempt;
      result.final_k = k;
      return result;
    }
    // A whole block without success means acceptance below 1 / block.
    if (attempt % params.block == 0 && k < params.k_max) k = std::min(2 * k, params.k_max);
  }
  throw MaxTriesExceeded("dense matching: no perfect matching in " + std::to_string(params.max_tries) +
                         " k-out subgraphs (final k = " + std::to_string(k) + ")");
}

XPerfectResult spread_X_perfect_matching(const Bigraph& b, double z, Rng& rng, const XPerfectParams& params) {
  const std::size_t big_j = b.num_x();
  const auto j = static_cast<double>(big_j);
  const auto big_r = static_cast<std::int64_t>(b.num_y()) - static_cast<std::int64_t>(big_j);
  if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("z must be a finite nonnegative number");
  const double zj = z * j;

  if (big_r < 0) {
    throw NegativeR("R = |Y| - J = " + std::to_string(big_r) + " is negative");
  }
  if (static_cast<double>(big_r) > zj + kTol) {
    throw HypothesisViolated("R = " + std::to_string(big_r) + " exceeds zJ = " + fmt(zj));
  }
  std::vector<std::int64_t> r_x;
  if (params.r) {
    if (params.r->size() != big_j) throw std::invalid_argument("r_x must have one entry per x");
    r_x = *params.r;
  } else {
    r_x.resize(big_j);
    for (Side x = 0; x < big_j; ++x) {
      r_x[x] = static_cast<std::int64_t>(big_j) - static_cast<std::int64_t>(b.x_degree(x));
    }
  }
  std::int64_t sum_r = 0;
  for (Side x = 0; x < big_j; ++x) {
    if (static_cast<std::int64_t>(b.x_degree(x)) < static_cast<std::int64_t>(big_j) - r_x[x]) {
      throw HypothesisViolated("d_B(x) >= J - r_x fails at x = " + std::to_string(x) + ": degree " +
                               std::to_string(b.x_degree(x)) + ", r_x = " + std::to_string(r_x[x]));
    }
    if (static_cast<double>(r_x[x]) > zj + kTol) {
      throw HypothesisViolated("max r_x <= zJ fails: r_" + std::to_string(x) + " = " + std::to_string(r_x[x]) +
                               " > " + fmt(zj));
    }
    sum_r += r_x[x];
  }
  if (static_cast<double>(sum_r) > zj + kTol) {
    throw HypothesisViolated("sum r_x <= zJ fails: " + std::to_string(sum_r) + " > " + fmt(zj));
  }

  XPerfectResult result;
  auto& stats = result.stats;
  result.matching = Matching(big_j, b.num_y());
  stats.delta = 5.0 * std::sqrt(z);
  const double popular_floor = (1.0 - stats.delta) * j;

  std::vector<bool> unpopular(b.num_y(), false);
  for (Side y = 0; y < b.num_y(); ++y) {
    if (static_cast<double>(b.y_degree(y)) < popular_floor) {
      unpopular[y] = true;
      ++stats.unpopular;
    }
  }
  stats.r = static_cast<std::int64_t>(stats.unpopular) - big_r;

  std::vector<bool> x_alive(big_j, true);
  if (stats.r > 0) {
    stats.greedy_phase = true;
    std::vector<bool> u_alive = unpopular;
    std::vector<Bigraph::BiEdge> choices;
    auto collect = [&] {
      choices.clear();
      for (Side y = 0; y < b.num_y(); ++y) {
        if (!u_alive[y]) continue;
        for (Side x : b.y_neighbors(y)) {
          if (x_alive[x]) choices.emplace_back(x, y);
        }
      }
      return choices.size();
    };
    const double u_size = static_cast<double>(stats.unpopular);
    stats.chain_asserted = u_size < stats.delta * j / 20.0;
    const double chain_floor = static_cast<double>(stats.r) * stats.delta * j / 2.0;
    auto check_chain = [&](std::size_t edges_now, std::int64_t step) {
      if (stats.chain_asserted && static_cast<double>(edges_now) < chain_floor - kTol) {
        throw InvariantViolated("greedy phase: e(B[X_i, U_i]) = " + std::to_string(edges_now) + " < r delta J / 2 = " +
                                fmt(chain_floor) + " at i = " + std::to_string(step));
      }
    };

    std::size_t edges_now = collect();
    stats.greedy_edge_counts.push_back(edges_now);
    check_chain(edges_now, 0);
    for (std::int64_t i = 1; i <= stats.r; ++i) {
      if (choices.empty()) {
        throw EmptyChoiceSet("greedy phase: B[X_i, U_i] has no edges at round " + std::to_string(i) + " of " +
                             std::to_string(stats.r));
      }
      const auto [x, y] = choices[rng.uniform(choices.size())];
      result.matching.add(x, y);
      x_alive[x] = false;
      u_alive[y] = false;
      const std::size_t before = edges_now;
      edges_now = collect();
      stats.greedy_edge_counts.push_back(edges_now);
      if (static_cast<double>(edges_now) < static_cast<double>(before) - u_size - popular_floor - kTol) {
        throw InvariantViolated("greedy phase lost more than |U| + (1 - delta) J edges at round " + std::to_string(i));
      }
      check_chain(edges_now, i);
    }
  }

  std::vector<Side> v0;
  for (Side x = 0; x < big_j; ++x) {
    if (x_alive[x]) v0.push_back(x);
  }
  std::vector<Side> v1;
  if (stats.r > 0) {
    for (Side y = 0; y < b.num_y(); ++y) {
      if (!unpopular[y]) v1.push_back(y);
    }
  } else {
    std::vector<Side> order(b.num_y());
    std::iota(order.begin(), order.end(), Side{0});
    std::stable_sort(order.begin(), order.end(), [&](Side a, Side c) { return b.y_degree(a) > b.y_degree(c); });
    v1.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(big_j));
    std::sort(v1.begin(), v1.end());
  }
  if (v0.size() != v1.size()) {
    throw InvariantViolated("dense phase sides differ: " + std::to_string(v0.size()) + " vs " +
                            std::to_string(v1.size()));
  }
  stats.dense_size = v0.size();
  if (!v0.empty()) {
    const Bigraph f = b.induced(v0, v1);
    std::size_t min_degree = std::numeric_limits<std::size_t>::max();
    for (Side v = 0; v < f.num_x(); ++v) min_degree = std::min({min_degree, f.x_degree(v), f.y_degree(v)});
    stats.dense_lambda = 1.0 - static_cast<double>(min_degree) / static_cast<double>(f.num_x());
    const auto dense = spread_matching_dense(f, stats.dense_lambda, rng, params.dense);
    stats.dense_attempts = dense.attempts;
    stats.dense_k = dense.final_k;
    for (auto [x, y] : dense.matching.edges()) result.matching.add(v0[x], v1[y]);
  }

  if (!result.matching.valid_in(b) || !result.matching.covers_x()) {
    throw InvariantViolated("assembled matching is not an X-perfect matching of B");
  }
  return result;
}

}  // namespace spreadcol
