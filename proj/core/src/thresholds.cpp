#include "spreadcol/thresholds.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <ostream>
#include <regex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "spreadcol/audit.hpp"
#include "spreadcol/errors.hpp"

namespace spreadcol {

std::size_t Hypergraph::max_edge_size() const {
  std::size_t out = 0;
  for (const auto& e : edges) out = std::max(out, e.size());
  return out;
}

void Hypergraph::validate() const {
  for (const auto& e : edges) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] >= ground.size()) throw std::invalid_argument("hyperedge element out of range");
      if (i > 0 && e[i] <= e[i - 1]) throw std::invalid_argument("hyperedge must be sorted without repeats");
    }
  }
}

namespace {

void check_weights(const Hypergraph& f, const std::vector<Rational>& q) {
  if (q.size() != f.ground.size()) throw std::invalid_argument("one weight per ground element is required");
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x] < 0 || q[x] > 1) {
      throw std::invalid_argument("weight of '" + f.ground[x] + "' is " + to_string(q[x]) + ", outside [0, 1]");
    }
  }
}

Rational mask_weight(std::uint32_t mask, const std::vector<Rational>& q) {
  Rational w = 1;
  for (std::uint32_t rest = mask; rest; rest &= rest - 1) w *= q[static_cast<std::size_t>(std::countr_zero(rest))];
  return w;
}

class CoverSearch {
 public:
  CoverSearch(std::vector<std::uint32_t> edges, const std::vector<Rational>& q) : edges_(std::move(edges)) {
    for (auto a : edges_) {
      edge_weight_.push_back(mask_weight(a, q));
      std::vector<std::pair<Rational, std::uint32_t>> subs;
      // Every submask of a, including a and the empty set.
      for (std::uint32_t b = a;; b = (b - 1) & a) {
        subs.emplace_back(mask_weight(b, q), b);
        if (b == 0) break;
      }
      std::sort(subs.begin(), subs.end());
      subsets_.push_back(std::move(subs));
    }
    best_ = 0;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      best_ += edge_weight_[i];
      best_cover_.push_back(edges_[i]);
    }
  }

  CostResult run() {
    std::vector<std::uint32_t> chosen;
    search(chosen, Rational(0));
    return {best_, best_cover_};
  }

 private:
  bool covered(std::uint32_t a, const std::vector<std::uint32_t>& chosen) const {
    return std::any_of(chosen.begin(), chosen.end(), [a](std::uint32_t b) { return (a & b) == b; });
  }

  void search(std::vector<std::uint32_t>& chosen, const Rational& cost) {
    std::size_t first = edges_.size();
    Rational bound = cost;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (covered(edges_[i], chosen)) continue;
      if (first == edges_.size()) first = i;
      if (cost + edge_weight_[i] > bound) bound = cost + edge_weight_[i];
    }
    if (first == edges_.size()) {
      if (cost < best_) {
        best_ = cost;
        best_cover_ = chosen;
      }
      return;
    }
    if (bound >= best_) return;
    for (const auto& [w, b] : subsets_[first]) {
      const Rational next = cost + w;
      if (next >= best_) break;
      const bool dominated =
          std::any_of(chosen.begin(), chosen.end(), [b = b](std::uint32_t c) { return (b & c) == b; });
      if (dominated) continue;
      chosen.push_back(b);
      search(chosen, next);
      chosen.pop_back();
    }
  }

  std::vector<std::uint32_t> edges_;
  std::vector<Rational> edge_weight_;
  std::vector<std::vector<std::pair<Rational, std::uint32_t>>> subsets_;
  Rational best_;
  std::vector<std::uint32_t> best_cover_;
};

}  // namespace

Rational expense(const Hypergraph& f, const std::vector<Rational>& q) {
  f.validate();
  check_weights(f, q);
  Rational total = 0;
  for (const auto& e : f.edges) {
    Rational w = 1;
    for (auto x : e) w *= q[x];
    total += w;
  }
  return total;
}

CostResult cost_bruteforce(const Hypergraph& f, const std::vector<Rational>& q) {
  f.validate();
  check_weights(f, q);
  if (f.ground.size() > 16) {
    throw CapExceeded("cost_bruteforce supports |X| <= 16, got " + std::to_string(f.ground.size()));
  }
  std::vector<std::uint32_t> masks;
  for (const auto& e : f.edges) {
    std::uint32_t m = 0;
    for (auto x : e) m |= 1u << x;
    masks.push_back(m);
  }
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  return CoverSearch(std::move(masks), q).run();
}

namespace {

std::string element_name(const nlohmann::json& e) { return e.is_string() ? e.get<std::string>() : e.dump(); }

// "3/10", "0.3" or "3e-1", read exactly.
Rational parse_weight(const std::string& text) {
  static const std::regex decimal(R"(([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?)");
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    static const std::regex integer(R"([+-]?\d+)");
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!std::regex_match(num, integer) || !std::regex_match(den, integer)) {
      throw std::invalid_argument("cannot read weight '" + text + "'");
    }
    const Rational d = parse_weight(den);
    if (d == 0) throw std::invalid_argument("zero denominator in weight '" + text + "'");
    return parse_weight(num) / d;
  }
  std::smatch m;
  if (!std::regex_match(text, m, decimal) || (m[2].length() == 0 && m[3].length() == 0)) {
    throw std::invalid_argument("cannot read weight '" + text + "'");
  }
  std::string digits = m[2].str() + m[3].str();
  // A leading zero would make the BigInt parser read octal.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  if (m[4].matched && m[4].length() > 4) throw std::invalid_argument("weight exponent out of range in '" + text + "'");
  long exponent = m[4].matched ? std::stol(m[4].str()) : 0;
  exponent -= static_cast<long>(m[3].length());
  Rational out{BigInt(digits.empty() ? "0" : digits)};
  const Rational ten(10);
  for (long i = 0; i < exponent; ++i) out *= ten;
  for (long i = exponent; i < 0; ++i) out /= ten;
  return m[1].str() == "-" ? Rational(-out) : out;
}

}  // namespace

void from_json(const nlohmann::json& j, Hypergraph& f) {
  f = Hypergraph{};
  std::unordered_map<std::string, std::uint32_t> index;
  for (const auto& e : j.at("ground")) {
    auto name = element_name(e);
    if (!index.emplace(name, static_cast<std::uint32_t>(f.ground.size())).second) {
      throw std::invalid_argument("ground element '" + name + "' listed twice");
    }
    f.ground.push_back(std::move(name));
  }
  for (const auto& edge : j.at("edges")) {
    std::vector<std::uint32_t> members;
    for (const auto& e : edge) {
      const auto it = index.find(element_name(e));
      if (it == index.end()) throw std::invalid_argument("edge uses unknown element " + element_name(e));
      members.push_back(it->second);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    f.edges.push_back(std::move(members));
  }
}

std::vector<Rational> weights_from_json(const nlohmann::json& j, const Hypergraph& f) {
  const auto& q = j.at("q");
  std::vector<Rational> out;
  for (const auto& name : f.ground) {
    if (!q.contains(name)) throw std::invalid_argument("no weight for element '" + name + "'");
    const auto& w = q.at(name);
    if (!w.is_string() && !w.is_number()) throw std::invalid_argument("weight of '" + name + "' is not a number");
    out.push_back(parse_weight(w.is_string() ? w.get<std::string>() : w.dump()));
  }
  return out;
}

void to_json(nlohmann::json& j, const Hypergraph& f) {
  auto edges = nlohmann::json::array();
  for (const auto& e : f.edges) {
    auto names = nlohmann::json::array();
    for (auto x : e) names.push_back(f.ground[x]);
    edges.push_back(std::move(names));
  }
  j = nlohmann::json{{"ground", f.ground}, {"edges", std::move(edges)}};
}

std::string_view to_string(Colorability c) {
  switch (c) {
    case Colorability::Colorable:
      return "colorable";
    case Colorability::NotColorable:
      return "not-colorable";
    case Colorability::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

namespace {

class ListColorer {
 public:
  ListColorer(const Graph& g, const ListAssignment& lists, std::uint64_t max_nodes)
      : g_(g), lists_(lists), max_nodes_(max_nodes), color_(g.num_vertices(), PartialColoring::kNoColor),
        available_(g.num_vertices()), blocked_(g.num_vertices()) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      available_[v] = lists[v].size();
      blocked_[v].assign(lists[v].size(), 0);
    }
  }

  ColorabilityResult run() {
    ColorabilityResult out;
    try {
      const bool ok = search(g_.num_vertices());
      out.verdict = ok ? Colorability::Colorable : Colorability::NotColorable;
      if (ok) out.witness = PartialColoring(g_.num_vertices(), assignments());
    } catch (const CapExceeded&) {
      out.verdict = Colorability::Indeterminate;
    }
    out.nodes = nodes_;
    return out;
  }

 private:
  std::vector<std::pair<Vertex, Color>> assignments() const {
    std::vector<std::pair<Vertex, Color>> out;
    for (Vertex v = 0; v < color_.size(); ++v) out.emplace_back(v, color_[v]);
    return out;
  }

  std::ptrdiff_t index_of(Vertex w, Color c) const {
    const auto list = lists_[w];
    const auto it = std::lower_bound(list.begin(), list.end(), c);
    return it != list.end() && *it == c ? it - list.begin() : -1;
  }

  bool search(std::size_t uncolored) {
    if (uncolored == 0) return true;
    if (++nodes_ > max_nodes_) throw CapExceeded("list coloring search budget exhausted");

    Vertex v = 0;
    std::size_t best = SIZE_MAX;
    for (Vertex u = 0; u < color_.size(); ++u) {
      if (color_[u] != PartialColoring::kNoColor) continue;
      if (available_[u] < best || (available_[u] == best && g_.degree(u) > g_.degree(v))) {
        best = available_[u];
        v = u;
      }
    }
    if (best == 0) return false;

    const auto list = lists_[v];
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (blocked_[v][i] != 0) continue;
      const Color c = list[i];
      color_[v] = c;
      bool wiped = false;
      std::vector<std::pair<Vertex, std::size_t>> touched;
      for (Vertex w : g_.neighbors(v)) {
        if (color_[w] != PartialColoring::kNoColor) continue;
        const auto j = index_of(w, c);
        if (j < 0) continue;
        if (blocked_[w][static_cast<std::size_t>(j)]++ == 0) {
          if (--available_[w] == 0) wiped = true;
        }
        touched.emplace_back(w, static_cast<std::size_t>(j));
      }
      if (!wiped && search(uncolored - 1)) return true;
      for (auto [w, j] : touched) {
        if (--blocked_[w][j] == 0) ++available_[w];
      }
      color_[v] = PartialColoring::kNoColor;
    }
    return false;
  }

  const Graph& g_;
  const ListAssignment& lists_;
  std::uint64_t max_nodes_;
  std::uint64_t nodes_ = 0;
  std::vector<Color> color_;
  std::vector<std::size_t> available_;
  std::vector<std::vector<std::uint32_t>> blocked_;
};

}  // namespace

ColorabilityResult decide_list_colorable(const Graph& g, const ListAssignment& lists, std::uint64_t max_nodes) {
  if (lists.size() != g.num_vertices()) throw std::invalid_argument("lists do not match the graph");
  return ListColorer(g, lists, max_nodes).run();
}

bool SparsificationCurve::nondecreasing_within_ci() const {
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i + 1].ci_hi < rows[i].ci_lo) return false;
  }
  return true;
}

void SparsificationCurve::write_csv(std::ostream& out) const {
  out << "k,trials,successes,rate,ci_lo,ci_hi\n";
  for (const auto& r : rows) {
    out << r.k << ',' << r.trials << ',' << r.successes << ',' << r.rate << ',' << r.ci_lo << ',' << r.ci_hi << '\n';
  }
}

std::vector<Color> random_sublist(std::size_t palette, std::size_t k, Rng& rng) {
  if (k > palette) throw std::invalid_argument("sublist larger than the palette");
  std::vector<Color> all(palette);
  for (std::size_t i = 0; i < palette; ++i) all[i] = static_cast<Color>(i + 1);
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.uniform(palette - i)]);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

SparsificationCurve sparsification_scan(const Graph& g, const std::vector<std::size_t>& k_values,
                                        const SparsificationParams& params) {
  const std::size_t palette = g.max_degree() + 1;
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 1 || k_values[i] > palette) throw std::invalid_argument("k must lie in [1, D+1]");
    if (i > 0 && k_values[i] <= k_values[i - 1]) throw std::invalid_argument("k values must strictly increase");
  }
  SparsificationCurve curve;
  for (std::size_t k : k_values) {
    const std::uint64_t row_seed = derive_seed(params.seed, k);
    struct Tally {
      std::uint64_t successes = 0;
      std::uint64_t indeterminate = 0;
    };
    auto run = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
      for (std::uint64_t t = begin; t < end; ++t) {
        Rng rng(derive_seed(row_seed, t));
        std::vector<std::vector<Color>> lists(g.num_vertices());
        for (auto& l : lists) l = random_sublist(palette, k, rng);
        const auto r = decide_list_colorable(g, ListAssignment(std::move(lists)), params.max_nodes);
        if (r.verdict == Colorability::Colorable) ++tally.successes;
        if (r.verdict == Colorability::Indeterminate) ++tally.indeterminate;
      }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min<std::uint64_t>(params.jobs, params.trials));
    std::vector<Tally> tallies(jobs);
    if (jobs == 1) {
      run(0, params.trials, tallies[0]);
    } else {
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(jobs);
      for (std::size_t j = 0; j < jobs; ++j) {
        threads.emplace_back([&, j] {
          try {
            run(params.trials * j / jobs, params.trials * (j + 1) / jobs, tallies[j]);
          } catch (...) {
            errors[j] = std::current_exception();
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    SparsificationRow row;
    row.k = k;
    row.trials = params.trials;
    for (const auto& t : tallies) {
      row.successes += t.successes;
      row.indeterminate += t.indeterminate;
    }
    row.rate = params.trials ? static_cast<double>(row.successes) / static_cast<double>(params.trials) : 0.0;
    const auto ci = wilson_interval(row.successes, row.trials);
    row.ci_lo = ci.lo;
    row.ci_hi = ci.hi;
    curve.rows.push_back(row);
  }
  return curve;
}

}  // namespace spreadcol
