#include "spreadcol/coloring.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace spreadcol {

ListAssignment::ListAssignment(std::vector<std::vector<Color>> lists) : lists_(std::move(lists)) {
  for (auto& list : lists_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

ListAssignment ListAssignment::uniform(std::size_t n, Color first, Color last) {
  std::vector<Color> palette;
  for (Color c = first; c <= last; ++c) palette.push_back(c);
  return ListAssignment(std::vector<std::vector<Color>>(n, palette));
}

ListAssignment ListAssignment::full_palette(const Graph& g) {
  return uniform(g.num_vertices(), 1, static_cast<Color>(g.max_degree() + 1));
}

bool ListAssignment::allows(Vertex v, Color c) const {
  const auto& list = lists_[v];
  return std::binary_search(list.begin(), list.end(), c);
}

Color ListAssignment::max_color() const {
  Color m = 0;
  for (const auto& list : lists_) {
    if (!list.empty()) m = std::max(m, list.back());
  }
  return m;
}

void ListAssignment::check_against(const Graph& g) const {
  if (lists_.size() != g.num_vertices()) {
    throw std::invalid_argument("list assignment has " + std::to_string(lists_.size()) +
                                " lists for " + std::to_string(g.num_vertices()) + " vertices");
  }
  for (Vertex v = 0; v < lists_.size(); ++v) {
    if (lists_[v].empty()) throw std::invalid_argument("empty list at vertex " + std::to_string(v));
    if (lists_[v].back() == PartialColoring::kNoColor) {
      throw std::invalid_argument("reserved color value in list of vertex " + std::to_string(v));
    }
  }
}

PartialColoring::PartialColoring(std::size_t n,
                                 std::span<const std::pair<Vertex, Color>> assignments)
    : colors_(n, kNoColor) {
  for (auto [v, c] : assignments) {
    if (v >= n) throw std::invalid_argument("invalid vertex id " + std::to_string(v));
    colors_[v] = c;
  }
}

std::size_t PartialColoring::domain_size() const {
  return static_cast<std::size_t>(
      std::count_if(colors_.begin(), colors_.end(), [](Color c) { return c != kNoColor; }));
}

std::vector<Vertex> PartialColoring::domain() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < colors_.size(); ++v) {
    if (colors_[v] != kNoColor) out.push_back(v);
  }
  return out;
}

std::vector<std::pair<Vertex, Color>> PartialColoring::assignments() const {
  std::vector<std::pair<Vertex, Color>> out;
  for (Vertex v = 0; v < colors_.size(); ++v) {
    if (colors_[v] != kNoColor) out.emplace_back(v, colors_[v]);
  }
  return out;
}

bool PartialColoring::is_proper(const Graph& g) const {
  if (g.num_vertices() != colors_.size()) return false;
  for (auto [u, v] : g.edges()) {
    if (colors_[u] != kNoColor && colors_[u] == colors_[v]) return false;
  }
  return true;
}

bool PartialColoring::respects(const ListAssignment& lists) const {
  if (lists.size() != colors_.size()) return false;
  for (Vertex v = 0; v < colors_.size(); ++v) {
    if (colors_[v] != kNoColor && !lists.allows(v, colors_[v])) return false;
  }
  return true;
}

bool PartialColoring::extends(const PartialColoring& other) const {
  if (other.colors_.size() != colors_.size()) return false;
  for (std::size_t v = 0; v < colors_.size(); ++v) {
    if (other.colors_[v] != kNoColor && other.colors_[v] != colors_[v]) return false;
  }
  return true;
}

}  // namespace spreadcol
