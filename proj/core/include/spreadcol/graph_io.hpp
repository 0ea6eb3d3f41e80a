#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "spreadcol/coloring.hpp"
#include "spreadcol/graph.hpp"

namespace spreadcol {

/// Edge-list text: one "u v" pair per line, 0-based ids, '#' starts a comment.
/// A comment of the form "# n=<count>" fixes the vertex count (so trailing
/// isolated vertices survive a round trip); otherwise n = max id + 1.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

/// {"n": n, "edges": [[u, v], ...]}
void to_json(nlohmann::json& j, const Graph& g);
void from_json(const nlohmann::json& j, Graph& g);

/// {"<v>": [colors], ...}
void to_json(nlohmann::json& j, const ListAssignment& lists);
ListAssignment list_assignment_from_json(const nlohmann::json& j, std::size_t n);

/// {"<v>": color, ...} over the colored vertices.
void to_json(nlohmann::json& j, const PartialColoring& coloring);
PartialColoring coloring_from_json(const nlohmann::json& j, std::size_t n);

}  // namespace spreadcol
