// spreadcol: command-line front end.
//
// Exit codes: 0 success, 1 a check or assertion failed, 2 usage error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spreadcol/audit.hpp"
#include "spreadcol/cluster_phase.hpp"
#include "spreadcol/config.hpp"
#include "spreadcol/decompose.hpp"
#include "spreadcol/errors.hpp"
#include "spreadcol/graph_io.hpp"
#include "spreadcol/greedy.hpp"
#include "spreadcol/thresholds.hpp"

using namespace spreadcol;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string config_path;
};

// Graph source shared by several subcommands: a file, or a generated random regular graph.
struct GraphSource {
  std::string path;
  std::size_t n = 0;
  std::size_t d = 0;
  std::optional<std::uint64_t> graph_seed;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--graph", path, "Edge-list file");
    cmd->add_option("--n", n, "Vertices of a generated random regular graph");
    cmd->add_option("--D", d, "Degree of a generated random regular graph");
    cmd->add_option("--graph-seed", graph_seed, "Seed for the generated graph (default: --seed)");
  }

  Graph load(std::uint64_t seed) const {
    if (!path.empty()) return read_edge_list_file(path);
    if (n == 0 || d == 0) throw UsageError("give --graph FILE or both --n and --D");
    return gen_random_regular(n, d, graph_seed.value_or(seed));
  }
};

RunConfig load_config(const GlobalOptions& g) {
  RunConfig c;
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw UsageError("cannot open config file " + g.config_path);
    c = config_from_json(json::parse(in));
  }
  if (g.seed) c.seed = *g.seed;
  if (g.jobs) c.jobs = *g.jobs;
  c.validate();
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

// Runs fn(i) for i in [0, count) on `jobs` threads; fn writes only to slot i.
template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(jobs);
  for (std::size_t j = 0; j < jobs; ++j) {
    threads.emplace_back([&, j] {
      try {
        for (std::size_t i = j; i < count; i += jobs) fn(i);
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

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw UsageError("bad --k entry '" + item + "'");
    }
  }
  return out;
}

int run_gen(const GlobalOptions& g, const GraphSource& src, const std::string& out, const std::string& format) {
  const auto cfg = load_config(g);
  if (!src.path.empty()) throw UsageError("gen takes --n and --D, not --graph");
  const Graph graph = src.load(cfg.seed);
  std::ostringstream text;
  if (format == "json") {
    text << json(graph).dump() << '\n';
  } else {
    write_edge_list(text, graph);
  }
  write_text(out, text.str());
  return kOk;
}

int run_decompose(const GlobalOptions& g, const GraphSource& src, std::optional<double> eps, const std::string& out) {
  auto cfg = load_config(g);
  if (eps) cfg.pipeline.eps_in = *eps;
  cfg.validate();
  const Graph graph = src.load(cfg.seed);
  if (!graph.is_regular()) throw UsageError("decompose needs a regular graph (the pipeline regularizes; this tool does not)");
  const auto dec = sparse_dense_decompose(graph, cfg.pipeline.eps_in, cfg.pipeline.decompose);
  const auto report = verify_decomposition(graph, dec);
  json j = dec;
  j["verified"] = report.ok();
  j["worst_margins"] = {{"sparsity", report.worst_sparsity_margin},
                        {"outside", report.worst_outside_margin},
                        {"nonneighbor", report.worst_nonneighbor_margin}};
  write_text(out, j.dump(2) + "\n");
  std::cerr << "sparse " << dec.sparse.size() << ", clusters " << dec.clusters.size() << ", verified "
            << (report.ok() ? "yes" : "no") << '\n';
  return report.ok() ? kOk : kCheckFailed;
}

int run_sample(const GlobalOptions& g, const GraphSource& src, std::size_t seeds, const std::string& out) {
  const auto cfg = load_config(g);
  const Graph graph = src.load(cfg.seed);
  const PreparedPipeline prep(graph, cfg.pipeline);
  std::vector<json> runs(seeds);
  std::vector<int> proper(seeds, 0);
  std::vector<int> flagged(seeds, 0);
  parallel_for(seeds, cfg.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i));
    const auto r = prep.sample(rng);
    proper[i] = r.coloring.is_total() && r.coloring.is_proper(graph) ? 1 : 0;
    flagged[i] = r.spread_guarantee ? 0 : 1;
    runs[i] = r;
    runs[i]["index"] = i;
  });
  const auto n_proper = static_cast<std::size_t>(std::count(proper.begin(), proper.end(), 1));
  const auto n_flagged = static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), 1));
  if (!out.empty()) {
    json j{{"config", to_json(cfg)}, {"parameters", prep.parameters()}, {"runs", runs}};
    write_text(out, j.dump() + "\n");
  }
  std::cout << "proper " << n_proper << "/" << seeds << ", flagged " << n_flagged << "/" << seeds << '\n';
  return n_proper == seeds ? kOk : kCheckFailed;
}

struct AuditOptions {
  std::string sampler = "pipeline";
  std::string counterexample;
  std::string family = "pairs";
  std::uint64_t trials = 10'000;
  std::size_t pairs_per_vertex = 10;
  std::string csv;
};

int run_audit(const GlobalOptions& g, const GraphSource& src, const AuditOptions& a) {
  const auto cfg = load_config(g);
  SpreadReportParams params;
  params.trials = a.trials;
  params.seed = cfg.seed;
  params.jobs = cfg.jobs;
  params.pairs_per_vertex = a.pairs_per_vertex;
  params.family = a.family == "singletons" ? FamilyKind::Singletons : FamilyKind::SingletonsAndPairs;

  Graph graph;
  ListAssignment lists;
  if (!a.counterexample.empty()) {
    if (src.d == 0) throw UsageError("--counterexample needs --D");
    auto inst = build_counterexample(parse_counterexample_kind(a.counterexample), src.d);
    graph = inst.graph;
    lists = inst.lists;
  } else {
    graph = src.load(cfg.seed);
    lists = ListAssignment::full_palette(graph);
  }
  const std::size_t n = graph.num_vertices();
  const std::size_t palette = graph.max_degree() + 1;

  Sampler sampler;
  std::optional<PreparedPipeline> prep;
  std::vector<PartialColoring> support;
  if (a.sampler == "pipeline") {
    if (!a.counterexample.empty()) throw UsageError("the pipeline sampler colors graphs, not counterexample lists");
    prep.emplace(graph, cfg.pipeline);
    sampler = [&prep](Rng& rng) {
      auto r = prep->sample(rng);
      return Sample{std::move(r.coloring), !r.spread_guarantee};
    };
  } else if (a.sampler == "uniform") {
    for_each_coloring(graph, lists, [&](const PartialColoring& c) {
      support.push_back(c);
      return true;
    });
    if (support.empty()) throw Error("no proper list coloring to sample from");
    sampler = [&support](Rng& rng) { return Sample{support[rng.uniform(support.size())], false}; };
  } else if (a.sampler == "random-greedy") {
    sampler = [&graph](Rng& rng) { return Sample{random_greedy_sample(graph, rng), false}; };
  } else {
    throw UsageError("unknown sampler '" + a.sampler + "'");
  }
  if (!a.counterexample.empty() && a.family == "singletons") {
    // Counterexample lists may use color 0.
    params.family = FamilyKind::Custom;
    for (Vertex v = 0; v < n; ++v) {
      for (Color c : lists[v]) params.custom.push_back({{v, c}});
    }
  }

  const auto report = spread_report(sampler, n, palette, params);
  if (!a.csv.empty()) {
    std::ostringstream text;
    report.write_csv(text);
    write_text(a.csv, text.str());
  }
  auto summary = report.summary();
  summary["sampler"] = a.sampler;
  summary["ceilings"] = {{"c_hat", cfg.ceilings.c_hat}, {"flagged_fraction", cfg.ceilings.flagged_fraction}};
  std::cout << summary.dump(2) << '\n';
  const bool ok = report.c_hat() <= cfg.ceilings.c_hat && report.flagged_fraction() <= cfg.ceilings.flagged_fraction;
  return ok ? kOk : kCheckFailed;
}

int run_counterexample(const std::string& kind_name, std::size_t d) {
  const auto kind = parse_counterexample_kind(kind_name);
  const auto inst = build_counterexample(kind, d);
  json j{{"kind", std::string(to_string(kind))}, {"D", d}, {"n", inst.graph.num_vertices()}};
  switch (kind) {
    case CounterexampleKind::RedThumb: {
      const auto p = exact_containment_uniform(inst.graph, inst.lists, inst.target);
      j["event"] = "sigma(0) = 0";
      j["probability"] = to_string(p);
      std::cout << "P(sigma(0) = 0) = " << p << '\n';
      break;
    }
    case CounterexampleKind::CliqueMinusClique: {
      const auto total = count_colorings(inst.graph, inst.lists);
      const auto p = exact_containment_uniform(inst.graph, inst.lists, inst.target);
      const auto s = static_cast<double>(std::llround(std::sqrt(static_cast<double>(d + 1))));
      const double formula = std::pow(static_cast<double>(d + 1), -0.5 * (s + 1.0));
      j["event"] = "every U vertex gets color D+1";
      j["colorings"] = total;
      j["probability"] = to_string(p);
      j["formula"] = formula;
      std::cout << "colorings " << total << ", P(U monochromatic in D+1) = " << p << " (formula " << formula << ")\n";
      break;
    }
    case CounterexampleKind::GreedyBoys: {
      const auto p = random_greedy_probability(inst.graph, inst.target);
      Rational bound = 1;
      for (std::size_t i = 0; i < d; ++i) bound /= static_cast<unsigned>(2 * d);
      j["event"] = "random greedy outputs the target coloring";
      j["probability"] = to_string(p);
      j["bound"] = to_string(bound);
      std::cout << "P(output = target) = " << p << " >= " << bound << (p >= bound ? "" : " FAILS") << '\n';
      std::cerr << j.dump() << '\n';
      return p >= bound ? kOk : kCheckFailed;
    }
  }
  std::cerr << j.dump() << '\n';
  return kOk;
}

int run_sparsify(const GlobalOptions& g, const GraphSource& src, const std::string& k_text, std::uint64_t trials,
                 std::uint64_t max_nodes, const std::string& csv) {
  const auto cfg = load_config(g);
  const Graph graph = src.load(cfg.seed);
  const std::size_t palette = graph.max_degree() + 1;
  std::vector<std::size_t> ks;
  if (k_text.empty()) {
    for (std::size_t k = 2; k < palette; k += 2) ks.push_back(k);
    ks.push_back(palette);
  } else {
    ks = parse_k_list(k_text);
  }
  SparsificationParams p;
  p.trials = trials;
  p.seed = cfg.seed;
  p.max_nodes = max_nodes;
  p.jobs = cfg.jobs;
  const auto curve = sparsification_scan(graph, ks, p);
  std::ostringstream text;
  curve.write_csv(text);
  write_text(csv.empty() ? "-" : csv, text.str());
  const bool monotone = curve.nondecreasing_within_ci();
  std::cerr << "nondecreasing within CI: " << (monotone ? "yes" : "no") << '\n';
  return monotone ? kOk : kCheckFailed;
}

int run_cost(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open hypergraph file " + path);
  const json j = json::parse(in);
  const auto f = j.get<Hypergraph>();
  const auto q = weights_from_json(j, f);
  const auto e = expense(f, q);
  const auto c = cost_bruteforce(f, q);
  auto cover = json::array();
  for (auto mask : c.cover) {
    auto names = json::array();
    for (std::size_t x = 0; x < f.ground.size(); ++x) {
      if (mask >> x & 1) names.push_back(f.ground[x]);
    }
    cover.push_back(std::move(names));
  }
  const json out{{"expense", to_string(e)},
                 {"expense_approx", to_double(e)},
                 {"cost", to_string(c.value)},
                 {"cost_approx", to_double(c.value)},
                 {"cover", cover},
                 {"max_edge_size", f.max_edge_size()}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spread (D+1)-colorings: sampling, audits and exact small-case checks"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("--seed", global.seed, "Master seed (default 1, or the config file's)");
  app.add_option("--config", global.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--jobs", global.jobs, "Worker threads for independent trials")->check(CLI::PositiveNumber);

  GraphSource src;
  std::string out;
  std::string format = "edges";
  auto* gen = app.add_subcommand("gen", "Write a random D-regular graph");
  src.add_to(gen);
  gen->add_option("--out", out, "Output file (default stdout)");
  gen->add_option("--format", format, "edges or json")->check(CLI::IsMember({"edges", "json"}));

  std::optional<double> eps;
  auto* decompose = app.add_subcommand("decompose", "Sparse-dense decomposition of a regular graph as JSON");
  src.add_to(decompose);
  decompose->add_option("--eps", eps, "eps_in, in (0, 1/20)");
  decompose->add_option("--out", out, "Output file (default stdout)");

  std::size_t seeds = 1;
  auto* sample = app.add_subcommand("sample", "Run the spread-coloring pipeline for several seeds");
  src.add_to(sample);
  sample->add_option("--seeds", seeds, "Number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--out", out, "JSON file with every coloring and its flags");

  AuditOptions audit_opts;
  auto* audit = app.add_subcommand("audit", "Monte Carlo spread report for a sampler");
  src.add_to(audit);
  audit->add_option("--sampler", audit_opts.sampler, "pipeline, uniform or random-greedy")
      ->check(CLI::IsMember({"pipeline", "uniform", "random-greedy"}));
  audit->add_option("--counterexample", audit_opts.counterexample, "Use a counterexample instance (with --D)");
  audit->add_option("--family", audit_opts.family, "singletons or pairs (singletons plus random pairs)")
      ->check(CLI::IsMember({"singletons", "pairs"}));
  audit->add_option("--trials", audit_opts.trials, "Samples to draw")->check(CLI::Range(100, 100'000'000));
  audit->add_option("--pairs-per-vertex", audit_opts.pairs_per_vertex, "Random pairs per vertex");
  audit->add_option("--csv", audit_opts.csv, "Write one CSV row per test set");

  std::string kind;
  std::size_t cd = 0;
  auto* counter = app.add_subcommand("counterexample", "Exact probabilities on the small counterexamples");
  counter->add_option("kind", kind, "red_thumb, clique_minus_clique or greedy_boys")->required();
  counter->add_option("--D", cd, "Degree")->required();

  std::string k_text;
  std::uint64_t trials = 200;
  std::uint64_t max_nodes = 10'000'000;
  std::string csv;
  auto* sparsify = app.add_subcommand("sparsify", "Palette sparsification success curve");
  src.add_to(sparsify);
  sparsify->add_option("--k", k_text, "Comma-separated list sizes (default 2,4,...,D+1)");
  sparsify->add_option("--trials", trials, "Trials per list size")->check(CLI::PositiveNumber);
  sparsify->add_option("--max-nodes", max_nodes, "Backtracking cap per trial");
  sparsify->add_option("--csv", csv, "Output file (default stdout)");

  std::string hyper;
  auto* cost = app.add_subcommand("cost", "Expense and exact cost of a hypergraph file");
  cost->add_option("file", hyper, "JSON {ground, edges, q}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return run_gen(global, src, out, format);
    if (decompose->parsed()) return run_decompose(global, src, eps, out);
    if (sample->parsed()) return run_sample(global, src, seeds, out);
    if (audit->parsed()) return run_audit(global, src, audit_opts);
    if (counter->parsed()) return run_counterexample(kind, cd);
    if (sparsify->parsed()) return run_sparsify(global, src, k_text, trials, max_nodes, csv);
    if (cost->parsed()) return run_cost(hyper);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "usage error: bad JSON input: " << e.what() << '\n';
    return kUsage;
  } catch (const HypothesisViolated& e) {
    std::cerr << "hypothesis violated: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
