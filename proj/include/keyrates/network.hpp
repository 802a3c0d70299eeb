#pragma once

#include <string>
#include <vector>

#include "keyrates/divergences.hpp"

namespace kr {

// Undirected weighted network of pairwise key links.
struct GraphEdge {
  int u = 0;
  int v = 0;
  double weight = 0;
};
struct WeightedGraph {
  std::vector<std::string> nodes;
  std::vector<GraphEdge> edges;
  // No self-loops, endpoints in range, weights nonnegative and finite.
  void validate() const;
};

// Pairwise rates r[i][j] between parties; -inf marks an absent link.
// The diagonal is ignored.
struct RateMatrix {
  std::vector<std::string> labels;
  RMat rates;
  int size() const { return static_cast<int>(labels.size()); }
  void validate() const;
};

// One-way distillation rate I(Y:target|Z) - I(Y:E|Z) of a cq state: Y and Z
// must be classical registers (invalid_input when their off-diagonal leakage
// exceeds tol::classical). May be negative; callers clamp when quoting
// achievable key.
double dw_rate(const DensityOperator& omega, const std::vector<int>& slots_Y,
               const std::vector<int>& slots_target, const std::vector<int>& slots_E,
               const std::vector<int>& slots_Z);

// Single-distributor aggregation: max_i min_{j != i} R[i][j], ties broken by
// the lowest distributor index.
struct StarResult {
  double value = 0;
  int hub = 0;
};
StarResult star_rate(const RateMatrix& R);

// Relay-chain aggregation: max over party orderings of the minimum
// consecutive rate. Exhaustive over permutations; sizes above 10 are
// rejected (bottleneck Hamiltonian path is NP-hard in general).
struct ChainResult {
  double value = 0;
  std::vector<int> order;
};
ChainResult chain_rate(const RateMatrix& R);

// Spanning tree maximizing the minimum edge weight, via the three-step
// recipe: M = max weight; minimum spanning tree under transformed weights
// M - w(e) (priority-queue Prim, parallel edges collapsed to max weight
// first); the value is M minus the largest transformed weight in that tree,
// i.e. the smallest original weight of a tree edge.
struct TreeResult {
  double value = 0;
  std::vector<GraphEdge> tree;  // edges with original weights
};
TreeResult max_bottleneck_spanning_tree(const WeightedGraph& g);

// Conference-key lower bound of a network whose edge weights are link rates:
// the max-bottleneck spanning tree value.
double tree_rate(const WeightedGraph& g);

// Pairwise rate matrix induced by a graph: max-weight edge per pair, -inf
// for absent links.
RateMatrix rates_from_graph(const WeightedGraph& g);

}  // namespace kr
