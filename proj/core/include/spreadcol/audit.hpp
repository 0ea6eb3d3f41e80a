#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spreadcol/coloring.hpp"
#include "spreadcol/rational.hpp"
#include "spreadcol/rng.hpp"

namespace spreadcol {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for hits / trials; [0, 1] when trials = 0.
Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kZ95);

/// A set of vertex-color pairs, kept sorted.
using TestSet = std::vector<std::pair<Vertex, Color>>;

bool contains(const PartialColoring& sigma, const TestSet& t);

/// One draw from a coloring distribution. Flagged draws carry no spread
/// guarantee and are left out of estimates.
struct Sample {
  PartialColoring coloring;
  bool flagged = false;
};

/// Must be safe to call concurrently with distinct Rng objects.
using Sampler = std::function<Sample(Rng&)>;

struct ContainmentEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;  // unflagged draws
  std::uint64_t flagged = 0;
  double p_hat = 0.0;
  Interval ci;
};

/// Trial i draws from Rng(derive_seed(seed, i)). Requires trials >= 100.
ContainmentEstimate estimate_containment(const Sampler& sampler, TestSet t, std::uint64_t trials,
                                         std::uint64_t seed);

enum class FamilyKind { Singletons, SingletonsAndPairs, Custom };

struct SpreadReportParams {
  FamilyKind family = FamilyKind::SingletonsAndPairs;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
  /// Number of random pairs is pairs_per_vertex * n.
  std::size_t pairs_per_vertex = 10;
  std::vector<TestSet> custom;
  std::size_t jobs = 1;
};

struct SpreadRow {
  TestSet set;
  std::uint64_t hits = 0;
  double p_hat = 0.0;
  Interval ci;
};

struct SpreadReport {
  std::vector<SpreadRow> rows;
  std::size_t palette = 0;  // D + 1
  std::uint64_t samples = 0;
  std::uint64_t flagged = 0;
  std::uint64_t trials = 0;  // unflagged samples, the denominator of every row

  /// max over nonempty rows of ci.hi^{1/|T|} * palette.
  double c_hat() const;
  /// Row attaining c_hat, or rows.size() when there is none.
  std::size_t worst_row() const;
  double flagged_fraction() const;

  void write_csv(std::ostream& out) const;
  nlohmann::json summary() const;
};

/// Test sets over vertices {0..n-1} and colors {1..palette}: every singleton,
/// plus pairs_per_vertex * n random pairs at two distinct vertices for
/// SingletonsAndPairs. Random pairs come from a stream of `seed` disjoint from
/// the trial streams.
std::vector<TestSet> build_family(std::size_t n, std::size_t palette, const SpreadReportParams& params);

/// Runs the sampler `trials` times (seeds as in estimate_containment) and
/// counts containment of every test set. Results do not depend on `jobs`.
SpreadReport spread_report(const Sampler& sampler, std::size_t n, std::size_t palette,
                           const SpreadReportParams& params);

/// Finite distribution of subsets of a ground set of at most 20 elements,
/// encoded as bitmasks.
struct ExplicitDistribution {
  std::uint32_t ground = 0;
  std::vector<std::pair<std::uint32_t, Rational>> outcomes;

  /// Throws std::invalid_argument on negative mass, mass off the ground set or
  /// total mass other than 1.
  void validate() const;
  /// P(S ⊇ t).
  Rational containment(std::uint32_t t) const;
};

/// p = containment^{1/size}, kept exactly.
struct SpreadValue {
  std::uint32_t witness = 0;
  Rational containment = 0;
  unsigned size = 0;

  double value() const;
};

/// a < b as real numbers (size 0 means value 0).
bool spread_less(const SpreadValue& a, const SpreadValue& b);
/// a <= factor * b, exactly.
bool spread_at_most(const SpreadValue& a, const SpreadValue& b, unsigned factor = 1);

/// max over nonempty T ⊆ ground, |T| <= size_cap, of P(S ⊇ T)^{1/|T|}, by a
/// superset-sum transform. Ties go to the smaller set, then the smaller mask.
/// Throws CapExceeded when the ground set has more than 20 elements.
SpreadValue exact_spread(const ExplicitDistribution& dist, unsigned size_cap = 32);

struct CompositionReport {
  SpreadValue p;           // spread of S
  SpreadValue q;           // max over outcomes s of spread(T_s)
  SpreadValue combined;    // spread of S ∪ T_S
  bool disjoint = false;   // every T ground set misses S's ground set
  bool within_double = true;  // combined <= 2 max(p, q)
  bool within_max = true;     // combined <= max(p, q), checked when disjoint

  bool ok() const { return within_double && (!disjoint || within_max); }
};

/// cond_t[i] is the law of T given S = dist_s.outcomes[i].first.
CompositionReport check_composition(const ExplicitDistribution& dist_s,
                                    const std::vector<ExplicitDistribution>& cond_t);

}  // namespace spreadcol
