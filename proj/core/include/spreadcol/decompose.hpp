#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "spreadcol/graph.hpp"

namespace spreadcol {

/// Partition V = V* ∪ C_1 ∪ ... ∪ C_m of a D-regular graph.
///
/// Sparse vertices satisfy e(Ḡ[N_v]) >= theta * D^2. Every cluster vertex v
/// has fewer than eps * D neighbors outside its cluster and fewer than
/// eps * D cluster-mates it is not adjacent to (v itself is not counted).
struct Decomposition {
  std::vector<Vertex> sparse;
  std::vector<std::vector<Vertex>> clusters;
  double eps = 0.0;
  double theta = 0.0;

  bool operator==(const Decomposition&) const = default;
};

/// Free constants of the construction. theta = theta_factor * eps_in^2 and
/// eps = eps_factor * eps_in.
struct DecomposeParams {
  double theta_factor = 1.0 / 16.0;
  double eps_factor = 8.0;
};

/// Sparse-dense decomposition of a D-regular graph, 0 < eps_in < 1/20.
///
/// Vertices with e(Ḡ[N_v]) < theta D^2 are dense. Dense u, w are friends when
/// their closed neighborhoods share at least (1 - 2 eps_in) D vertices, and
/// clusters are the connected components of the friend graph. A repair pass
/// demotes violating cluster vertices that pass the sparsity test; any other
/// violation throws VerificationFailed. The result is verified before return.
Decomposition sparse_dense_decompose(const Graph& g, double eps_in,
                                     const DecomposeParams& params = {});

struct VertexCheck {
  Vertex v = 0;
  /// -1 for V*, otherwise the cluster index.
  int part = -1;
  bool sparsity_ok = true;
  bool outside_ok = true;
  bool nonneighbor_ok = true;
  bool ok() const { return sparsity_ok && outside_ok && nonneighbor_ok; }
};

struct DecompositionReport {
  bool partition_ok = true;
  std::vector<VertexCheck> vertices;
  std::size_t failures = 0;
  /// min over V* of e(Ḡ[N_v]) - theta D^2; pass iff >= 0.
  double worst_sparsity_margin = 0.0;
  /// min over cluster vertices of eps D - |N_v \ C|; pass iff > 0.
  double worst_outside_margin = 0.0;
  /// min over cluster vertices of eps D - |C \ N[v]|; pass iff > 0.
  double worst_nonneighbor_margin = 0.0;

  bool ok() const { return partition_ok && failures == 0; }
};

/// Checks all three invariants vertex by vertex; never throws on bad input.
DecompositionReport verify_decomposition(const Graph& g, const Decomposition& dec);

void to_json(nlohmann::json& j, const Decomposition& dec);
void from_json(const nlohmann::json& j, Decomposition& dec);

}  // namespace spreadcol
