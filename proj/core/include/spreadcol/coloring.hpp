#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "spreadcol/graph.hpp"

namespace spreadcol {

using Color = std::uint32_t;

/// Per-vertex color lists S_v. Each list is kept sorted and duplicate-free.
class ListAssignment {
 public:
  ListAssignment() = default;
  explicit ListAssignment(std::vector<std::vector<Color>> lists);

  /// Every vertex gets {first, ..., last}.
  static ListAssignment uniform(std::size_t n, Color first, Color last);
  /// Every vertex gets the palette {1, ..., D+1}.
  static ListAssignment full_palette(const Graph& g);

  std::size_t size() const { return lists_.size(); }
  std::span<const Color> operator[](Vertex v) const { return lists_[v]; }
  bool allows(Vertex v, Color c) const;
  Color max_color() const;

  /// Throws std::invalid_argument if the lists do not cover `g` or any list is empty.
  void check_against(const Graph& g) const;

 private:
  std::vector<std::vector<Color>> lists_;
};

/// Map from a subset of V to colors. Uncolored vertices hold kNoColor.
class PartialColoring {
 public:
  static constexpr Color kNoColor = std::numeric_limits<Color>::max();

  PartialColoring() = default;
  explicit PartialColoring(std::size_t n) : colors_(n, kNoColor) {}
  /// From (vertex, color) assignments on n vertices.
  PartialColoring(std::size_t n, std::span<const std::pair<Vertex, Color>> assignments);

  std::size_t num_vertices() const { return colors_.size(); }
  bool is_colored(Vertex v) const { return colors_[v] != kNoColor; }
  Color operator[](Vertex v) const { return colors_[v]; }
  void assign(Vertex v, Color c) { colors_[v] = c; }
  void clear(Vertex v) { colors_[v] = kNoColor; }

  std::size_t domain_size() const;
  std::vector<Vertex> domain() const;
  std::vector<std::pair<Vertex, Color>> assignments() const;
  bool is_total() const { return domain_size() == colors_.size(); }

  /// No edge with both endpoints colored carries the same color.
  bool is_proper(const Graph& g) const;
  /// Every colored vertex uses a color from its list.
  bool respects(const ListAssignment& lists) const;
  /// Every assignment of `other` also appears here.
  bool extends(const PartialColoring& other) const;

  std::span<const Color> raw() const { return colors_; }

  bool operator==(const PartialColoring&) const = default;
  auto operator<=>(const PartialColoring&) const = default;

 private:
  std::vector<Color> colors_;
};

}  // namespace spreadcol
