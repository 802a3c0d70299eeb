#include "keyrates/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

#include "keyrates/divergences.hpp"

namespace kr {

void WeightedGraph::validate() const {
  require(!nodes.empty(), "graph needs at least one node");
  for (const auto& e : edges) {
    require(e.u >= 0 && e.u < static_cast<int>(nodes.size()) && e.v >= 0 &&
                e.v < static_cast<int>(nodes.size()),
            "edge endpoint out of range");
    require(e.u != e.v, "self-loops are not allowed");
    require(std::isfinite(e.weight) && e.weight >= 0.0,
            "edge weights must be finite and nonnegative");
  }
}

void RateMatrix::validate() const {
  int n = static_cast<int>(labels.size());
  require(n >= 1, "rate matrix needs at least one node");
  require(rates.rows() == n && rates.cols() == n, "rate matrix must be square over the labels");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double r = rates(i, j);
      require(!std::isnan(r) && r != kInf, "pair rates must be finite or absent (-inf)");
    }
}

double dw_rate(const DensityOperator& omega, const std::vector<int>& y_slots,
               const std::vector<int>& target_slots, const std::vector<int>& eve_slots,
               const std::vector<int>& cond_slots) {
  require(!y_slots.empty(), "measurement register must be nonempty");
  require(!target_slots.empty(), "target register must be nonempty");
  double gain = conditional_mutual_information(omega, y_slots, target_slots, cond_slots);
  double leak = eve_slots.empty()
                    ? 0.0
                    : conditional_mutual_information(omega, y_slots, eve_slots, cond_slots);
  return gain - leak;
}

StarResult star_rate(const RateMatrix& R) {
  R.validate();
  int n = R.size();
  require(n >= 2, "star protocol needs at least two nodes");
  StarResult best{-kInf, 0};
  for (int hub = 0; hub < n; ++hub) {
    double worst = kInf;
    for (int j = 0; j < n; ++j) {
      if (j == hub) continue;
      worst = std::min(worst, R.rates(hub, j));
    }
    if (worst > best.value) best = StarResult{worst, hub};
  }
  return best;
}

ChainResult chain_rate(const RateMatrix& R) {
  R.validate();
  int n = R.size();
  require(n >= 2, "chain protocol needs at least two nodes");
  require(n <= 10, "chain ordering search is limited to 10 nodes");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  ChainResult best{-kInf, {}};
  do {
    double worst = kInf;
    for (int k = 0; k + 1 < n; ++k) worst = std::min(worst, R.rates(order[k], order[k + 1]));
    if (worst > best.value) best = ChainResult{worst, order};
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

TreeResult max_bottleneck_spanning_tree(const WeightedGraph& graph) {
  graph.validate();
  int n = static_cast<int>(graph.nodes.size());
  require(n >= 2, "spanning tree needs at least two nodes");

  // Collapse parallel edges, keeping the strongest link per pair.
  std::map<std::pair<int, int>, double> strongest;
  for (const auto& e : graph.edges) {
    auto key = std::minmax(e.u, e.v);
    auto [it, fresh] = strongest.try_emplace({key.first, key.second}, e.weight);
    if (!fresh) it->second = std::max(it->second, e.weight);
  }
  require(!strongest.empty(), "graph has no edges");

  double max_w = 0.0;
  for (const auto& [key, w] : strongest) max_w = std::max(max_w, w);

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& [key, w] : strongest) {
    adj[key.first].push_back({key.second, w});
    adj[key.second].push_back({key.first, w});
  }

  // Prim's algorithm on the complemented weights (max_w - w): a minimum
  // spanning tree there maximizes the weakest edge of the original graph.
  std::vector<bool> in_tree(n, false);
  std::vector<double> cost(n, kInf);
  std::vector<int> via(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  cost[0] = 0.0;
  heap.push({0.0, 0});
  TreeResult result;
  while (!heap.empty()) {
    auto [c, u] = heap.top();
    heap.pop();
    if (in_tree[u]) continue;
    in_tree[u] = true;
    if (via[u] >= 0) {
      double w = max_w - cost[u];
      result.tree.push_back(GraphEdge{via[u], u, w});
    }
    for (auto [v, w] : adj[u]) {
      double flipped = max_w - w;
      if (!in_tree[v] && flipped < cost[v]) {
        cost[v] = flipped;
        via[v] = u;
        heap.push({flipped, v});
      }
    }
  }
  for (int u = 0; u < n; ++u)
    require(in_tree[u], "graph is disconnected: no spanning tree exists");

  result.value = kInf;
  for (const auto& e : result.tree) result.value = std::min(result.value, e.weight);
  return result;
}

double tree_rate(const WeightedGraph& graph) { return max_bottleneck_spanning_tree(graph).value; }

RateMatrix rates_from_graph(const WeightedGraph& graph) {
  graph.validate();
  int n = static_cast<int>(graph.nodes.size());
  RateMatrix rm;
  rm.labels = graph.nodes;
  rm.rates = RMat::Constant(n, n, -kInf);
  for (int i = 0; i < n; ++i) rm.rates(i, i) = 0.0;
  for (const auto& e : graph.edges) {
    rm.rates(e.u, e.v) = std::max(rm.rates(e.u, e.v), e.weight);
    rm.rates(e.v, e.u) = rm.rates(e.u, e.v);
  }
  return rm;
}

}  // namespace kr
