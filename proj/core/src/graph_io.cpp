#include "spreadcol/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spreadcol {

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t declared_n = 0;
  bool has_declared_n = false;
  std::size_t max_id_plus_one = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      const std::string comment = line.substr(hash + 1);
      std::istringstream cs(comment);
      std::string token;
      if (cs >> token && token.rfind("n=", 0) == 0) {
        declared_n = std::stoull(token.substr(2));
        has_declared_n = true;
      }
      line.resize(hash);
    }
    std::istringstream ls(line);
    long long u = 0;
    long long v = 0;
    if (!(ls >> u)) continue;
    std::string rest;
    if (!(ls >> v) || (ls >> rest) || u < 0 || v < 0) {
      throw std::invalid_argument("malformed edge on line " + std::to_string(line_no));
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  const std::size_t n = has_declared_n ? declared_n : max_id_plus_one;
  return Graph(n, edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# n=" << g.num_vertices() << "\n";
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file " + path);
  write_edge_list(out, g);
}

void to_json(nlohmann::json& j, const Graph& g) {
  auto edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  j = nlohmann::json{{"n", g.num_vertices()}, {"edges", std::move(edges)}};
}

void from_json(const nlohmann::json& j, Graph& g) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
  }
  g = Graph(j.at("n").get<std::size_t>(), edges);
}

void to_json(nlohmann::json& j, const ListAssignment& lists) {
  j = nlohmann::json::object();
  for (Vertex v = 0; v < lists.size(); ++v) {
    const auto list = lists[v];
    j[std::to_string(v)] = std::vector<Color>(list.begin(), list.end());
  }
}

ListAssignment list_assignment_from_json(const nlohmann::json& j, std::size_t n) {
  std::vector<std::vector<Color>> lists(n);
  for (const auto& [key, value] : j.items()) {
    const auto v = std::stoull(key);
    if (v >= n) throw std::invalid_argument("list for invalid vertex " + key);
    lists[v] = value.get<std::vector<Color>>();
  }
  return ListAssignment(std::move(lists));
}

void to_json(nlohmann::json& j, const PartialColoring& coloring) {
  j = nlohmann::json::object();
  for (auto [v, c] : coloring.assignments()) j[std::to_string(v)] = c;
}

PartialColoring coloring_from_json(const nlohmann::json& j, std::size_t n) {
  PartialColoring out(n);
  for (const auto& [key, value] : j.items()) {
    const auto v = std::stoull(key);
    if (v >= n) throw std::invalid_argument("color for invalid vertex " + key);
    out.assign(static_cast<Vertex>(v), value.get<Color>());
  }
  return out;
}

}  // namespace spreadcol
