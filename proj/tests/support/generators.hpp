// Random small instances shared by the unit and acceptance tests.
#pragma once

#include <cstdint>
#include <vector>

#include "spreadcol/audit.hpp"
#include "spreadcol/rational.hpp"
#include "spreadcol/rng.hpp"

namespace gen {

using spreadcol::ExplicitDistribution;
using spreadcol::Rational;
using spreadcol::Rng;

/// 1..max_outcomes random subsets of `ground` with random positive integer
/// weights, normalized. Repeated subsets are allowed.
inline ExplicitDistribution random_distribution(std::uint32_t ground, std::size_t max_outcomes, Rng& rng) {
  ExplicitDistribution d;
  d.ground = ground;
  const std::size_t k = 1 + rng.uniform(max_outcomes);
  std::vector<std::uint64_t> w(k);
  std::uint64_t total = 0;
  for (auto& x : w) total += (x = 1 + rng.uniform(9));
  for (std::size_t i = 0; i < k; ++i) {
    const auto mask = static_cast<std::uint32_t>(rng.next()) & ground;
    d.outcomes.emplace_back(mask, Rational(w[i], total));
  }
  return d;
}

inline std::uint32_t span_mask(unsigned first, unsigned count) { return ((1u << count) - 1) << first; }

struct CompositionInstance {
  ExplicitDistribution s;
  std::vector<ExplicitDistribution> t;
};

/// S on {0..a-1}, a <= 4; each T_s on a window of at most 4 elements that is
/// either disjoint from S's ground set or overlaps it. The union stays within
/// 8 elements.
inline CompositionInstance random_composition(Rng& rng) {
  CompositionInstance inst;
  const unsigned a = 1 + static_cast<unsigned>(rng.uniform(4));
  const unsigned b = 1 + static_cast<unsigned>(rng.uniform(4));
  const bool overlap = rng.uniform(2) == 1;
  const unsigned first = overlap ? static_cast<unsigned>(rng.uniform(a)) : a;
  inst.s = random_distribution(span_mask(0, a), 4, rng);
  for (std::size_t i = 0; i < inst.s.outcomes.size(); ++i) {
    inst.t.push_back(random_distribution(span_mask(first, b), 4, rng));
  }
  return inst;
}

}  // namespace gen
