#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "spreadcol/audit.hpp"
#include "spreadcol/errors.hpp"
#include "spreadcol/matching.hpp"

using namespace spreadcol;
using Side = Bigraph::Side;

namespace {

Bigraph random_bigraph(std::size_t nx, std::size_t ny, double p, Rng& rng) {
  std::vector<Bigraph::BiEdge> e;
  for (Side x = 0; x < nx; ++x) {
    for (Side y = 0; y < ny; ++y) {
      if (rng.uniform_real() < p) e.emplace_back(x, y);
    }
  }
  return Bigraph(nx, ny, e);
}

// Complete J x (J+R) minus the listed edges.
Bigraph complete_minus(std::size_t nx, std::size_t ny, const std::set<std::pair<Side, Side>>& removed) {
  std::vector<Bigraph::BiEdge> e;
  for (Side x = 0; x < nx; ++x) {
    for (Side y = 0; y < ny; ++y) {
      if (!removed.count({x, y})) e.emplace_back(x, y);
    }
  }
  return Bigraph(nx, ny, e);
}

}  // namespace

TEST_CASE("bigraph basics") {
  const std::vector<Bigraph::BiEdge> e{{0, 1}, {1, 1}, {0, 1}, {2, 0}};
  const Bigraph b(3, 2, e);
  CHECK(b.num_edges() == 3);
  CHECK(b.x_degree(0) == 1);
  CHECK(b.y_degree(1) == 2);
  CHECK(b.has_edge(2, 0));
  CHECK_FALSE(b.has_edge(2, 1));
  const std::vector<Bigraph::BiEdge> bad{{3, 0}};
  CHECK_THROWS_AS(Bigraph(3, 2, bad), std::invalid_argument);

  const std::vector<Side> xs{2, 0};
  const std::vector<Side> ys{0, 1};
  const Bigraph sub = b.induced(xs, ys);
  CHECK(sub.num_x() == 2);
  CHECK(sub.has_edge(0, 0));
  CHECK(sub.has_edge(1, 1));
  CHECK(sub.num_edges() == 2);
  CHECK(Bigraph::complete(3, 4).num_edges() == 12);
}

TEST_CASE("matching bookkeeping") {
  Matching m(2, 3);
  m.add(0, 2);
  CHECK_THROWS_AS(m.add(1, 2), std::logic_error);
  CHECK(m.size() == 1);
  CHECK_FALSE(m.covers_x());
  m.add(1, 0);
  CHECK(m.covers_x());
  CHECK(m.mate_of_y(2) == 0);
  CHECK(m.mate_of_y(1) == Matching::kUnmatched);
  CHECK(m.valid_in(Bigraph::complete(2, 3)));
  const std::vector<Bigraph::BiEdge> e{{0, 2}};
  CHECK_FALSE(m.valid_in(Bigraph(2, 3, e)));
}

TEST_CASE("perfect matching examples") {
  CHECK(perfect_matching(Bigraph::complete(7, 7)).has_value());
  std::vector<Bigraph::BiEdge> star;
  for (Side y = 0; y < 5; ++y) star.emplace_back(0, y);
  const Bigraph s(5, 5, star);
  CHECK_FALSE(perfect_matching(s).has_value());
  CHECK(maximum_matching(s).size() == 1);
  CHECK(perfect_matching(Bigraph(0, 3)).has_value());
}

TEST_CASE("Hopcroft-Karp agrees with exhaustive search") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t nx = 1 + rng.uniform(9);
    const std::size_t ny = 1 + rng.uniform(9);
    const Bigraph b = random_bigraph(nx, ny, 0.1 + 0.5 * rng.uniform_real(), rng);
    const Matching m = maximum_matching(b);
    CHECK(m.valid_in(b));
    CHECK(m.size() == oracle::max_matching_size(b));
    CHECK(maximum_matching(b) == m);
  }
}

TEST_CASE("random 3-out bigraphs on J=100 are usually X-perfect") {
  const Bigraph full = Bigraph::complete(100, 100);
  Rng rng(4);
  int perfect = 0;
  for (int t = 0; t < 100; ++t) perfect += perfect_matching(kout_subgraph(full, 3, rng)).has_value() ? 1 : 0;
  CHECK(perfect >= 90);
}

TEST_CASE("k-out subgraph") {
  Rng rng(2);
  const Bigraph b = random_bigraph(12, 15, 0.4, rng);
  CHECK(kout_subgraph(b, 20, rng) == b);

  const Bigraph full = Bigraph::complete(30, 30);
  for (int t = 0; t < 20; ++t) {
    const Bigraph k = kout_subgraph(full, 1, rng);
    CHECK(k.num_edges() <= 60);
    for (Side v = 0; v < 30; ++v) {
      CHECK(k.x_degree(v) >= 1);
      CHECK(k.y_degree(v) >= 1);
    }
  }

  const Bigraph sub = kout_subgraph(b, 2, rng);
  for (auto [x, y] : sub.edges()) CHECK(b.has_edge(x, y));

  // P(fixed edge kept) = 1 - (1 - 2/50)^2 for independent choices at both ends.
  const Bigraph c50 = Bigraph::complete(50, 50);
  const std::uint64_t trials = 20'000;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng r(derive_seed(31, t));
    hits += kout_subgraph(c50, 2, r).has_edge(7, 11) ? 1 : 0;
  }
  const double expected = 1.0 - (1.0 - 2.0 / 50.0) * (1.0 - 2.0 / 50.0);
  CHECK(expected == doctest::Approx(0.0784));
  const auto ci = wilson_interval(hits, trials, 4.0);
  CHECK(expected >= ci.lo);
  CHECK(expected <= ci.hi);
}

TEST_CASE("dense spread matching") {
  Rng rng(6);
  SUBCASE("complete 100x100 accepts at least 90% of attempts") {
    std::size_t attempts = 0;
    for (int t = 0; t < 50; ++t) {
      const auto out = spread_matching_dense(Bigraph::complete(100, 100), 0.0, rng);
      CHECK(out.matching.covers_x());
      attempts += out.attempts;
    }
    CHECK(50.0 / static_cast<double>(attempts) >= 0.9);
  }
  SUBCASE("complete minus a perfect matching") {
    std::set<std::pair<Side, Side>> removed;
    for (Side i = 0; i < 50; ++i) removed.insert({i, i});
    const Bigraph f = complete_minus(50, 50, removed);
    for (int t = 0; t < 20; ++t) {
      const auto out = spread_matching_dense(f, 0.02, rng);
      CHECK(out.matching.valid_in(f));
      CHECK(out.matching.covers_x());
      for (auto [x, y] : out.matching.edges()) CHECK(x != y);
    }
  }
  SUBCASE("hypothesis violations") {
    std::set<std::pair<Side, Side>> removed;
    for (Side y = 1; y < 20; ++y) removed.insert({0, y});
    const Bigraph f = complete_minus(20, 20, removed);
    CHECK_THROWS_AS(spread_matching_dense(f, 0.1, rng), HypothesisViolated);
    CHECK_THROWS_AS(spread_matching_dense(Bigraph::complete(10, 10), 0.3, rng), HypothesisViolated);
    CHECK_THROWS_AS(spread_matching_dense(Bigraph::complete(10, 11), 0.0, rng), HypothesisViolated);
  }
  SUBCASE("no perfect matching exhausts the attempts") {
    // Two x's share a single neighbour, so no attempt can succeed.
    std::set<std::pair<Side, Side>> removed;
    for (Side y = 1; y < 4; ++y) {
      removed.insert({0, y});
      removed.insert({1, y});
    }
    const Bigraph f = complete_minus(4, 4, removed);
    DenseMatchingParams p;
    p.lambda_max = 1.0;
    p.max_tries = 30;
    p.block = 10;
    CHECK_THROWS_AS(spread_matching_dense(f, 0.75, rng, p), MaxTriesExceeded);
  }
}

TEST_CASE("X-perfect matching") {
  Rng rng(10);
  SUBCASE("complete J x J takes the dense phase only") {
    const auto out = spread_X_perfect_matching(Bigraph::complete(40, 40), 0.01, rng);
    CHECK(out.matching.covers_x());
    CHECK(out.stats.unpopular == 0);
    CHECK(out.stats.r == 0);
    CHECK_FALSE(out.stats.greedy_phase);
    CHECK(out.stats.dense_size == 40);
  }
  SUBCASE("J=200, R=1 with one unpopular color") {
    // Color 200 has degree 99 < (1 - 5 sqrt(0.01)) 200 = 100.
    std::set<std::pair<Side, Side>> removed;
    for (Side x = 99; x < 200; ++x) removed.insert({x, 200});
    const Bigraph b = complete_minus(200, 201, removed);
    const auto out = spread_X_perfect_matching(b, 0.01, rng);
    CHECK(out.stats.unpopular == 1);
    CHECK(out.stats.r == 0);
    CHECK(out.matching.covers_x());
    CHECK(out.matching.mate_of_y(200) == Matching::kUnmatched);
  }
  SUBCASE("r <= 0 keeps the top-J colors, ties by id") {
    // Color 200 has degree 100: popular, r = -1, and it is the lowest degree.
    std::set<std::pair<Side, Side>> removed;
    for (Side x = 100; x < 200; ++x) removed.insert({x, 200});
    const Bigraph b = complete_minus(200, 201, removed);
    const auto out = spread_X_perfect_matching(b, 0.01, rng);
    CHECK(out.stats.r == -1);
    CHECK(out.matching.mate_of_y(200) == Matching::kUnmatched);
    const auto tie = spread_X_perfect_matching(Bigraph::complete(20, 21), 0.05, rng);
    CHECK(tie.matching.mate_of_y(20) == Matching::kUnmatched);
  }
  SUBCASE("greedy phase with r > 0") {
    // J=200, R=1, two unpopular colors of degree 99: r = 1. Their absent
    // edges give x in 99..199 a deficit; r_x = J - d(x) sums to 2 = zJ.
    std::set<std::pair<Side, Side>> removed;
    for (Side x = 99; x < 200; ++x) {
      removed.insert({x, 200});
      removed.insert({x, 201});
    }
    // Drop color 199's edges to x in 0..98 so Y has 199 full colors.
    std::vector<Bigraph::BiEdge> e;
    for (Side x = 0; x < 200; ++x) {
      for (Side y = 0; y < 202; ++y) {
        if (y == 199 || removed.count({x, y})) continue;
        e.emplace_back(x, y);
      }
    }
    // Re-index to J + R = 201 colors: 0..198 full, 199/200 the unpopular pair.
    std::vector<Bigraph::BiEdge> remapped;
    for (auto [x, y] : e) remapped.emplace_back(x, y == 200 ? 199 : y == 201 ? 200 : y);
    const Bigraph b(200, 201, remapped);
    REQUIRE(b.y_degree(199) == 99);
    REQUIRE(b.y_degree(200) == 99);
    const auto out = spread_X_perfect_matching(b, 0.01, rng);
    CHECK(out.stats.greedy_phase);
    CHECK(out.stats.r == 1);
    CHECK(out.stats.greedy_edge_counts.size() == 2);
    CHECK(out.stats.greedy_edge_counts[0] == 198);
    CHECK(out.stats.chain_asserted);
    CHECK(out.matching.covers_x());
    const bool one_used = (out.matching.mate_of_y(199) != Matching::kUnmatched) !=
                          (out.matching.mate_of_y(200) != Matching::kUnmatched);
    CHECK(one_used);
  }
  SUBCASE("hypothesis violations") {
    CHECK_THROWS_AS(spread_X_perfect_matching(Bigraph::complete(10, 9), 0.1, rng), NegativeR);
    CHECK_THROWS_AS(spread_X_perfect_matching(Bigraph::complete(10, 12), 0.1, rng), HypothesisViolated);
    std::set<std::pair<Side, Side>> removed{{0, 0}, {1, 1}, {2, 2}};
    const Bigraph b = complete_minus(20, 20, removed);
    // r_x = J - d(x) gives sum 3 > zJ = 2.
    CHECK_THROWS_AS(spread_X_perfect_matching(b, 0.1, rng), HypothesisViolated);
    XPerfectParams p;
    p.r = std::vector<std::int64_t>(20, 0);
    // d(0) = 19 < J - r_0 = 20.
    CHECK_THROWS_AS(spread_X_perfect_matching(b, 0.5, rng, p), HypothesisViolated);
    p.r = std::vector<std::int64_t>(3, 0);
    CHECK_THROWS_AS(spread_X_perfect_matching(b, 0.5, rng, p), std::invalid_argument);
  }
}
