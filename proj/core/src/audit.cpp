#include "spreadcol/audit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "spreadcol/errors.hpp"

namespace spreadcol {

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (hits > trials) throw std::invalid_argument("wilson_interval: hits exceed trials");
  if (trials == 0) return {0.0, 1.0};
  const auto n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

bool contains(const PartialColoring& sigma, const TestSet& t) {
  return std::all_of(t.begin(), t.end(), [&](const auto& pair) {
    return pair.first < sigma.num_vertices() && sigma[pair.first] == pair.second;
  });
}

ContainmentEstimate estimate_containment(const Sampler& sampler, TestSet t, std::uint64_t trials,
                                         std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("estimate_containment needs at least 100 trials");
  std::sort(t.begin(), t.end());
  ContainmentEstimate est;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, i));
    const auto s = sampler(rng);
    if (s.flagged) {
      ++est.flagged;
      continue;
    }
    ++est.trials;
    est.hits += contains(s.coloring, t) ? 1 : 0;
  }
  est.p_hat = est.trials ? static_cast<double>(est.hits) / static_cast<double>(est.trials) : 0.0;
  est.ci = wilson_interval(est.hits, est.trials);
  return est;
}

double SpreadReport::c_hat() const {
  const auto w = worst_row();
  if (w == rows.size()) return 0.0;
  return std::pow(rows[w].ci.hi, 1.0 / static_cast<double>(rows[w].set.size())) * static_cast<double>(palette);
}

std::size_t SpreadReport::worst_row() const {
  std::size_t best = rows.size();
  double best_value = -1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].set.empty()) continue;
    const double v = std::pow(rows[i].ci.hi, 1.0 / static_cast<double>(rows[i].set.size()));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

double SpreadReport::flagged_fraction() const {
  return samples ? static_cast<double>(flagged) / static_cast<double>(samples) : 0.0;
}

namespace {

std::string set_label(const TestSet& t) {
  std::string out;
  for (const auto& [v, c] : t) {
    if (!out.empty()) out += ';';
    out += std::to_string(v) + ':' + std::to_string(c);
  }
  return out;
}

}  // namespace

void SpreadReport::write_csv(std::ostream& out) const {
  out << "set,size,trials,hits,p_hat,ci_lo,ci_hi\n";
  for (const auto& row : rows) {
    out << set_label(row.set) << ',' << row.set.size() << ',' << trials << ',' << row.hits << ',' << row.p_hat
        << ',' << row.ci.lo << ',' << row.ci.hi << '\n';
  }
}

nlohmann::json SpreadReport::summary() const {
  nlohmann::json j{{"palette", palette},
                   {"samples", samples},
                   {"flagged", flagged},
                   {"flagged_fraction", flagged_fraction()},
                   {"trials", trials},
                   {"test_sets", rows.size()},
                   {"c_hat", c_hat()}};
  const auto w = worst_row();
  if (w < rows.size()) {
    j["worst"] = {{"set", set_label(rows[w].set)},
                  {"p_hat", rows[w].p_hat},
                  {"ci_lo", rows[w].ci.lo},
                  {"ci_hi", rows[w].ci.hi}};
  }
  return j;
}

std::vector<TestSet> build_family(std::size_t n, std::size_t palette, const SpreadReportParams& params) {
  std::vector<TestSet> family;
  if (params.family == FamilyKind::Custom) {
    for (auto t : params.custom) {
      std::sort(t.begin(), t.end());
      family.push_back(std::move(t));
    }
    return family;
  }
  for (Vertex v = 0; v < n; ++v) {
    for (Color c = 1; c <= palette; ++c) family.push_back({{v, c}});
  }
  if (params.family == FamilyKind::SingletonsAndPairs && n >= 2 && palette >= 1) {
    Rng rng(mix64(params.seed) ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < params.pairs_per_vertex * n; ++i) {
      const auto u = static_cast<Vertex>(rng.uniform(n));
      auto v = static_cast<Vertex>(rng.uniform(n - 1));
      if (v >= u) ++v;
      TestSet t{{u, static_cast<Color>(1 + rng.uniform(palette))}, {v, static_cast<Color>(1 + rng.uniform(palette))}};
      std::sort(t.begin(), t.end());
      family.push_back(std::move(t));
    }
  }
  return family;
}

SpreadReport spread_report(const Sampler& sampler, std::size_t n, std::size_t palette,
                           const SpreadReportParams& params) {
  SpreadReport report;
  report.palette = palette;
  report.samples = params.trials;
  const auto family = build_family(n, palette, params);

  // Singletons are counted through a (vertex, color) slot table; other sets directly.
  const std::size_t stride = palette + 1;
  std::vector<std::size_t> slot(n * stride, family.size());
  std::vector<std::size_t> general;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& t = family[i];
    if (t.size() == 1 && t[0].first < n && t[0].second <= palette && slot[t[0].first * stride + t[0].second] == family.size()) {
      slot[t[0].first * stride + t[0].second] = i;
    } else {
      general.push_back(i);
    }
  }

  struct Tally {
    std::vector<std::uint64_t> hits;
    std::uint64_t flagged = 0;
  };
  auto run = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
    tally.hits.assign(family.size(), 0);
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(params.seed, i));
      const auto s = sampler(rng);
      if (s.flagged) {
        ++tally.flagged;
        continue;
      }
      const std::size_t limit = std::min(n, s.coloring.num_vertices());
      for (Vertex v = 0; v < limit; ++v) {
        const Color c = s.coloring[v];
        if (c <= palette) {
          const std::size_t row = slot[v * stride + c];
          if (row != family.size()) ++tally.hits[row];
        }
      }
      for (std::size_t row : general) tally.hits[row] += contains(s.coloring, family[row]) ? 1 : 0;
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::uint64_t>(params.jobs, params.trials));
  std::vector<Tally> tallies(jobs);
  if (jobs == 1) {
    run(0, params.trials, tallies[0]);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t k = 0; k < jobs; ++k) {
      const std::uint64_t begin = params.trials * k / jobs;
      const std::uint64_t end = params.trials * (k + 1) / jobs;
      threads.emplace_back([&, k, begin, end] {
        try {
          run(begin, end, tallies[k]);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<std::uint64_t> hits(family.size(), 0);
  for (const auto& tally : tallies) {
    report.flagged += tally.flagged;
    for (std::size_t i = 0; i < family.size(); ++i) hits[i] += tally.hits[i];
  }
  report.trials = report.samples - report.flagged;
  report.rows.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    SpreadRow row;
    row.set = family[i];
    row.hits = hits[i];
    row.p_hat = report.trials ? static_cast<double>(hits[i]) / static_cast<double>(report.trials) : 0.0;
    row.ci = wilson_interval(hits[i], report.trials);
    report.rows.push_back(std::move(row));
  }
  return report;
}

void ExplicitDistribution::validate() const {
  Rational total = 0;
  for (const auto& [mask, prob] : outcomes) {
    if (prob < 0) throw std::invalid_argument("explicit distribution has negative mass");
    if ((mask & ~ground) != 0) throw std::invalid_argument("explicit distribution outcome leaves the ground set");
    total += prob;
  }
  if (total != 1) throw std::invalid_argument("explicit distribution mass is " + to_string(total) + ", not 1");
}

Rational ExplicitDistribution::containment(std::uint32_t t) const {
  Rational total = 0;
  for (const auto& [mask, prob] : outcomes) {
    if ((mask & t) == t) total += prob;
  }
  return total;
}

namespace {

Rational power(const Rational& base, unsigned exponent) {
  Rational out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

bool positive(const SpreadValue& v) { return v.size > 0 && v.containment > 0; }

}  // namespace

double SpreadValue::value() const {
  if (size == 0) return 0.0;
  return std::pow(to_double(containment), 1.0 / static_cast<double>(size));
}

bool spread_less(const SpreadValue& a, const SpreadValue& b) {
  if (!positive(b)) return false;
  if (!positive(a)) return true;
  return power(a.containment, b.size) < power(b.containment, a.size);
}

bool spread_at_most(const SpreadValue& a, const SpreadValue& b, unsigned factor) {
  if (!positive(a)) return true;
  if (!positive(b)) return false;
  const Rational scale = power(Rational(factor), a.size * b.size);
  return power(a.containment, b.size) <= scale * power(b.containment, a.size);
}

SpreadValue exact_spread(const ExplicitDistribution& dist, unsigned size_cap) {
  const int m = std::popcount(dist.ground);
  if (m > 20) throw CapExceeded("exact_spread supports ground sets of at most 20 elements, got " + std::to_string(m));
  std::vector<std::uint32_t> element;
  for (unsigned b = 0; b < 32; ++b) {
    if (dist.ground & (1u << b)) element.push_back(1u << b);
  }
  auto compact = [&](std::uint32_t mask) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < element.size(); ++i) {
      if (mask & element[i]) out |= 1u << i;
    }
    return out;
  };
  const std::size_t size = std::size_t{1} << m;
  std::vector<Rational> sup(size, Rational(0));
  for (const auto& [mask, prob] : dist.outcomes) sup[compact(mask)] += prob;
  for (int i = 0; i < m; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t mask = 0; mask < size; ++mask) {
      if (!(mask & bit)) sup[mask] += sup[mask | bit];
    }
  }
  SpreadValue best;
  std::uint32_t best_compact = 0;
  for (std::size_t mask = 1; mask < size; ++mask) {
    const auto k = static_cast<unsigned>(std::popcount(mask));
    if (k > size_cap) continue;
    SpreadValue cand{0, sup[mask], k};
    bool take = spread_less(best, cand);
    if (!take && positive(cand) && !spread_less(cand, best)) {
      take = k < best.size || (k == best.size && mask < best_compact);
    }
    if (take) {
      best = cand;
      best_compact = static_cast<std::uint32_t>(mask);
    }
  }
  for (std::size_t i = 0; i < element.size(); ++i) {
    if (best_compact & (1u << i)) best.witness |= element[i];
  }
  return best;
}

CompositionReport check_composition(const ExplicitDistribution& dist_s,
                                    const std::vector<ExplicitDistribution>& cond_t) {
  dist_s.validate();
  if (cond_t.size() != dist_s.outcomes.size()) {
    throw std::invalid_argument("check_composition needs one conditional law per outcome of S");
  }
  CompositionReport report;
  report.p = exact_spread(dist_s);
  report.disjoint = true;
  std::uint32_t ground = dist_s.ground;
  std::map<std::uint32_t, Rational> joint;
  for (std::size_t i = 0; i < cond_t.size(); ++i) {
    const auto& t = cond_t[i];
    t.validate();
    ground |= t.ground;
    report.disjoint = report.disjoint && (t.ground & dist_s.ground) == 0;
    const auto& [s_mask, s_prob] = dist_s.outcomes[i];
    if (s_prob == 0) continue;
    const auto q = exact_spread(t);
    if (spread_less(report.q, q)) report.q = q;
    for (const auto& [t_mask, t_prob] : t.outcomes) joint[s_mask | t_mask] += s_prob * t_prob;
  }
  ExplicitDistribution combined;
  combined.ground = ground;
  for (auto& [mask, prob] : joint) combined.outcomes.emplace_back(mask, prob);
  report.combined = exact_spread(combined);
  const SpreadValue& larger = spread_less(report.p, report.q) ? report.q : report.p;
  report.within_double = spread_at_most(report.combined, larger, 2);
  report.within_max = spread_at_most(report.combined, larger, 1);
  return report;
}

}  // namespace spreadcol
