#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "spreadcol/audit.hpp"
#include "spreadcol/errors.hpp"
#include "spreadcol/greedy.hpp"
#include "spreadcol/thresholds.hpp"

using namespace spreadcol;

namespace {

Hypergraph hypergraph(std::size_t n, std::vector<std::vector<std::uint32_t>> edges) {
  Hypergraph f;
  for (std::size_t i = 0; i < n; ++i) f.ground.push_back("x" + std::to_string(i));
  f.edges = std::move(edges);
  return f;
}

std::vector<std::uint32_t> masks(const Hypergraph& f) {
  std::vector<std::uint32_t> out;
  for (const auto& e : f.edges) {
    std::uint32_t m = 0;
    for (auto x : e) m |= 1u << x;
    out.push_back(m);
  }
  return out;
}

Hypergraph random_hypergraph(std::size_t n, Rng& rng) {
  std::vector<std::vector<std::uint32_t>> edges(1 + rng.uniform(4));
  for (auto& e : edges) {
    for (std::uint32_t x = 0; x < n; ++x) {
      if (rng.uniform(2) == 1) e.push_back(x);
    }
  }
  return hypergraph(n, std::move(edges));
}

std::vector<Rational> random_weights(std::size_t n, Rng& rng) {
  std::vector<Rational> q;
  for (std::size_t i = 0; i < n; ++i) q.emplace_back(static_cast<int>(rng.uniform(11)), 10);
  return q;
}

bool covers(const std::vector<std::uint32_t>& cover, const std::vector<std::uint32_t>& edges) {
  for (auto a : edges) {
    bool hit = false;
    for (auto b : cover) hit = hit || (b & a) == b;
    if (!hit) return false;
  }
  return true;
}

Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.uniform_real() < p) e.emplace_back(u, v);
    }
  }
  return Graph(n, e);
}

}  // namespace

TEST_CASE("expense") {
  CHECK(expense(hypergraph(1, {{0}}), {Rational(3, 10)}) == Rational(3, 10));
  CHECK(expense(hypergraph(1, {{}}), {Rational(3, 10)}) == 1);
  CHECK(expense(hypergraph(3, {{0, 1}, {1, 2}}), {Rational(1, 2), Rational(1, 2), Rational(1, 2)}) == Rational(1, 2));
  CHECK_THROWS_AS(expense(hypergraph(1, {{0}}), {Rational(3, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(expense(hypergraph(2, {{0}}), {Rational(1, 2)}), std::invalid_argument);
}

TEST_CASE("cost examples") {
  const auto single = cost_bruteforce(hypergraph(1, {{0}}), {Rational(3, 10)});
  CHECK(single.value == Rational(3, 10));
  CHECK(single.cover == std::vector<std::uint32_t>{0b1});

  const auto pair = cost_bruteforce(hypergraph(2, {{0, 1}}), {Rational(9, 10), Rational(9, 10)});
  CHECK(pair.value == Rational(81, 100));
  CHECK(pair.cover == std::vector<std::uint32_t>{0b11});

  // Covering both edges by {x1} is cheaper than the edges themselves.
  const std::vector<Rational> q{Rational(9, 10), Rational(1, 2), Rational(9, 10)};
  const auto shared = cost_bruteforce(hypergraph(3, {{0, 1}, {1, 2}}), q);
  CHECK(shared.value == Rational(1, 2));
  CHECK(shared.cover == std::vector<std::uint32_t>{0b010});

  CHECK(cost_bruteforce(hypergraph(2, {}), {Rational(1), Rational(1)}).value == 0);
  CHECK_THROWS_AS(cost_bruteforce(hypergraph(17, {{0}}), std::vector<Rational>(17, Rational(1, 2))), CapExceeded);
}

TEST_CASE("cost agrees with exhaustive enumeration") {
  Rng rng(71);
  for (int trial = 0; trial < 150; ++trial) {
    // Every family over 4 elements is 2^16 of them; keep most instances at 3.
    const std::size_t n = trial % 25 == 0 ? 4 : 1 + rng.uniform(3);
    const auto f = random_hypergraph(n, rng);
    const auto q = random_weights(n, rng);
    const auto c = cost_bruteforce(f, q);
    CHECK(c.value == oracle::cost_by_families(masks(f), q));
    CHECK(c.value == oracle::cost_by_choices(masks(f), q));
    CHECK(covers(c.cover, masks(f)));
    Rational witness = 0;
    for (auto b : c.cover) witness += oracle::weight(b, q);
    CHECK(witness == c.value);
  }
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 5 + rng.uniform(4);
    const auto f = random_hypergraph(n, rng);
    const auto q = random_weights(n, rng);
    CHECK(cost_bruteforce(f, q).value == oracle::cost_by_choices(masks(f), q));
  }
}

TEST_CASE("cost properties") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform(6);
    const auto f = random_hypergraph(n, rng);
    const auto q = random_weights(n, rng);
    const auto c = cost_bruteforce(f, q).value;
    CHECK(c <= expense(f, q));
    if (f.edges.size() > 1) {
      auto smaller = f;
      smaller.edges.pop_back();
      CHECK(cost_bruteforce(smaller, q).value <= c);
    }
  }
}

TEST_CASE("hypergraph JSON") {
  const auto j = nlohmann::json::parse(R"({"ground": ["a", "b", 3], "edges": [["b", "a"], [3]],
                                           "q": {"a": 0.3, "b": "1/3", "3": 1e-1}})");
  const auto f = j.get<Hypergraph>();
  CHECK(f.ground == std::vector<std::string>{"a", "b", "3"});
  CHECK(f.edges == std::vector<std::vector<std::uint32_t>>{{0, 1}, {2}});
  CHECK(f.max_edge_size() == 2);
  CHECK(f.is_bounded(2));
  CHECK_FALSE(f.is_bounded(1));
  const auto q = weights_from_json(j, f);
  CHECK(q == std::vector<Rational>{Rational(3, 10), Rational(1, 3), Rational(1, 10)});
  const nlohmann::json back = f;
  CHECK(back["edges"] == nlohmann::json::parse(R"([["a", "b"], ["3"]])"));

  CHECK_THROWS_AS(nlohmann::json::parse(R"({"ground": ["a"], "edges": [["z"]]})").get<Hypergraph>(),
                  std::invalid_argument);
  CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"q": {"a": 0.5}})"), f), std::invalid_argument);
  CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"q": {"a": "half", "b": 1, "3": 1}})"), f),
                  std::invalid_argument);
  CHECK_THROWS_AS(hypergraph(2, {{1, 0}}).validate(), std::invalid_argument);
}

TEST_CASE("weights with leading zeros are decimal") {
  const auto f = nlohmann::json::parse(R"({"ground": ["a", "b", "c", "d"], "edges": []})").get<Hypergraph>();
  const auto q = weights_from_json(
      nlohmann::json::parse(R"({"q": {"a": 0.9, "b": 0.12, "c": "010/012", "d": "0.080"}})"), f);
  CHECK(q == std::vector<Rational>{Rational(9, 10), Rational(3, 25), Rational(5, 6), Rational(2, 25)});
  CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"q": {"a": "1/0", "b": 0, "c": 0, "d": 0}})"), f),
                  std::invalid_argument);
  CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"q": {"a": "1e99999", "b": 0, "c": 0, "d": 0}})"), f),
                  std::invalid_argument);
  CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"q": {"a": "1/x", "b": 0, "c": 0, "d": 0}})"), f),
                  std::invalid_argument);
}

TEST_CASE("list colorability examples") {
  const Graph petersen_like = gen_random_regular(12, 3, 1);
  CHECK(decide_list_colorable(petersen_like, ListAssignment::full_palette(petersen_like)).verdict ==
        Colorability::Colorable);
  const Graph k2 = complete_graph(2);
  CHECK(decide_list_colorable(k2, ListAssignment(std::vector<std::vector<Color>>{{1}, {1}})).verdict ==
        Colorability::NotColorable);
  const Graph k3 = complete_graph(3);
  CHECK(decide_list_colorable(k3, ListAssignment::uniform(3, 1, 2)).verdict == Colorability::NotColorable);
  CHECK(to_string(Colorability::Indeterminate) == "indeterminate");
}

TEST_CASE("list colorability agrees with enumeration") {
  Rng rng(33);
  int colorable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform(8);
    const Graph g = random_graph(n, 0.6, rng);
    std::vector<std::vector<Color>> raw(n);
    for (auto& l : raw) {
      const std::size_t k = 1 + rng.uniform(3);
      for (std::size_t i = 0; i < k; ++i) l.push_back(static_cast<Color>(1 + rng.uniform(4)));
    }
    const ListAssignment lists(raw);
    const auto r = decide_list_colorable(g, lists);
    const bool expected = !oracle::all_colorings(g, lists).empty();
    CHECK((r.verdict == Colorability::Colorable) == expected);
    CHECK(r.verdict != Colorability::Indeterminate);
    CHECK((r.verdict == Colorability::Colorable) == (count_colorings(g, lists) > 0));
    if (r.verdict == Colorability::Colorable) {
      ++colorable;
      CHECK(r.witness.is_total());
      CHECK(r.witness.is_proper(g));
      CHECK(r.witness.respects(lists));
    }
  }
  CHECK(colorable > 50);
  CHECK(colorable < 250);
}

TEST_CASE("node cap gives an indeterminate verdict") {
  // K_6 with lists of size 5 has no coloring, but proving it takes many nodes.
  const Graph k6 = complete_graph(6);
  const auto r = decide_list_colorable(k6, ListAssignment::uniform(6, 1, 5), 10);
  CHECK(r.verdict == Colorability::Indeterminate);
  const auto full = decide_list_colorable(k6, ListAssignment::uniform(6, 1, 5));
  CHECK(full.verdict == Colorability::NotColorable);
  CHECK(full.nodes > 10);
}

TEST_CASE("random sublists") {
  Rng rng(4);
  std::vector<int> counts(6, 0);
  for (int t = 0; t < 30'000; ++t) {
    const auto l = random_sublist(6, 2, rng);
    REQUIRE(l.size() == 2);
    CHECK(l[0] < l[1]);
    CHECK(l[1] <= 6);
    for (Color c : l) ++counts[c - 1];
  }
  // Each color lands in a 2-subset with probability 1/3.
  for (int c : counts) {
    const auto ci = wilson_interval(static_cast<std::uint64_t>(c), 30'000, 4.0);
    CHECK(1.0 / 3.0 >= ci.lo);
    CHECK(1.0 / 3.0 <= ci.hi);
  }
  CHECK(random_sublist(4, 4, rng) == std::vector<Color>{1, 2, 3, 4});
  CHECK_THROWS_AS(random_sublist(3, 4, rng), std::invalid_argument);
}

TEST_CASE("sparsification scan") {
  SUBCASE("full palette always succeeds") {
    const Graph g = gen_random_regular(30, 4, 2);
    SparsificationParams p;
    p.trials = 50;
    const auto curve = sparsification_scan(g, {5}, p);
    REQUIRE(curve.rows.size() == 1);
    CHECK(curve.rows[0].rate == 1.0);
    CHECK(curve.rows[0].successes == 50);
  }
  SUBCASE("K_2 with k=1 succeeds with probability 1 - 1/(D+1)") {
    const Graph k2 = complete_graph(2);
    SparsificationParams p;
    p.trials = 4000;
    p.seed = 8;
    const auto curve = sparsification_scan(k2, {1, 2}, p);
    const auto ci = wilson_interval(curve.rows[0].successes, 4000, 4.0);
    CHECK(0.5 >= ci.lo);
    CHECK(0.5 <= ci.hi);
    CHECK(curve.rows[1].rate == 1.0);
    CHECK(curve.nondecreasing_within_ci());
  }
  SUBCASE("a star with k=1 succeeds with probability (D/(D+1))^D") {
    const Graph star(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
    SparsificationParams p;
    p.trials = 4000;
    p.seed = 3;
    const auto curve = sparsification_scan(star, {1}, p);
    const auto ci = wilson_interval(curve.rows[0].successes, 4000, 4.0);
    CHECK(27.0 / 64.0 >= ci.lo);
    CHECK(27.0 / 64.0 <= ci.hi);
  }
  SUBCASE("jobs do not change the result") {
    const Graph g = gen_random_regular(20, 4, 6);
    SparsificationParams p;
    p.trials = 60;
    p.seed = 1;
    const auto one = sparsification_scan(g, {2, 3}, p);
    p.jobs = 4;
    const auto four = sparsification_scan(g, {2, 3}, p);
    for (std::size_t i = 0; i < 2; ++i) CHECK(one.rows[i].successes == four.rows[i].successes);
  }
  SUBCASE("k validation") {
    const Graph k2 = complete_graph(2);
    CHECK_THROWS_AS(sparsification_scan(k2, {0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(sparsification_scan(k2, {3}, {}), std::invalid_argument);
    CHECK_THROWS_AS(sparsification_scan(k2, {2, 1}, {}), std::invalid_argument);
  }
  SUBCASE("curve helpers") {
    SparsificationCurve c;
    c.rows.push_back({1, 10, 9, 0, 0.9, 0.6, 0.98});
    c.rows.push_back({2, 10, 2, 0, 0.2, 0.05, 0.5});
    CHECK_FALSE(c.nondecreasing_within_ci());
    c.rows[1].ci_hi = 0.61;
    CHECK(c.nondecreasing_within_ci());
    std::ostringstream csv;
    c.write_csv(csv);
    CHECK(csv.str() == "k,trials,successes,rate,ci_lo,ci_hi\n1,10,9,0.9,0.6,0.98\n2,10,2,0.2,0.05,0.61\n");
  }
}
