#pragma once

// Layered-deletion mechanism for rank-2 instances over a public support
// graph. Goods are BFS-layered per component; for each residue class p mod
// (k+1) the goods in that class are deleted and the remaining instance is
// solved exactly by tree-decomposition DP. The best of the k+1 candidate
// allocations is kept. Each vertex weight dies in one part and each edge in
// at most two, so the winner reaches at least (1 - 2/(k+1)) of the optimum;
// k = ceil(2/eps) gives a (1 - eps) guarantee. The candidate set is fixed
// by the support graph alone, so exact per-part optimization plus Clarke
// payments is truthful.

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgca/exact.hpp"
#include "hgca/rational.hpp"
#include "hgca/tree_decomposition.hpp"
#include "hgca/valuation.hpp"
#include "hgca/vcg.hpp"

namespace hgca {

struct BakerPlan {
  int k = 0;
  int parts = 0;                        // k + 1
  std::vector<int> layer_class;         // per good: BFS layer mod parts
  std::vector<std::vector<int>> kept;   // per part: surviving goods, ascending
  std::vector<std::optional<TreeDecomposition>> part_td;  // empty part -> nullopt
  int max_width = 0;                    // widest part decomposition
};

// BFS layers over `edges`: the chosen root's component first, then one
// search per remaining component from its smallest unvisited good.
inline std::vector<int> bfs_layers(int num_goods, const std::vector<std::pair<int, int>>& edges,
                                   int root) {
  if (root < 0 || root >= num_goods) throw std::out_of_range("bfs_layers: bad root");
  std::vector<std::vector<int>> adj(num_goods);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> layer(num_goods, -1);
  auto search = [&](int from) {
    layer[from] = 0;
    std::queue<int> queue;
    queue.push(from);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (int w : adj[u])
        if (layer[w] == -1) {
          layer[w] = layer[u] + 1;
          queue.push(w);
        }
    }
  };
  search(root);
  for (int g = 0; g < num_goods; ++g)
    if (layer[g] == -1) search(g);
  return layer;
}

struct BakerPartition {
  int k = 0;
  int root = 0;
  std::vector<std::vector<int>> parts;  // k+1 residue classes, goods ascending
};

// Residue-class partition of goods by BFS distance mod (k+1).
inline BakerPartition baker_partition(int num_goods,
                                      const std::vector<std::pair<int, int>>& edges, int root,
                                      int k) {
  if (k < 1) throw std::invalid_argument("baker_partition: k must be >= 1");
  BakerPartition out;
  out.k = k;
  out.root = root;
  out.parts.resize(k + 1);
  std::vector<int> layer = bfs_layers(num_goods, edges, root);
  for (int g = 0; g < num_goods; ++g) out.parts[layer[g] % (k + 1)].push_back(g);
  return out;
}

inline BakerPlan make_baker_plan(const Instance& inst, const Rational& epsilon) {
  if (epsilon <= Rational(0)) throw std::invalid_argument("baker: epsilon must be positive");
  if (!inst.support_graph)
    throw std::invalid_argument("baker: instance needs a support graph");
  if (inst.rank() > 2) throw std::invalid_argument("baker: rank above 2");
  BakerPlan plan;
  BigInt k_big = ceil_rational(Rational(2) / epsilon);
  if (k_big > 1000000) throw std::invalid_argument("baker: epsilon too small");
  plan.k = k_big.convert_to<int>();
  plan.parts = plan.k + 1;
  const auto edges = instance_graph_edges(inst);
  std::vector<int> layer =
      inst.num_goods > 0 ? bfs_layers(inst.num_goods, edges, 0) : std::vector<int>{};
  plan.layer_class.resize(inst.num_goods);
  for (int j = 0; j < inst.num_goods; ++j) plan.layer_class[j] = layer[j] % plan.parts;
  plan.kept.resize(plan.parts);
  plan.part_td.resize(plan.parts);
  for (int p = 0; p < plan.parts; ++p) {
    std::vector<int> old_to_new(inst.num_goods, -1);
    for (int j = 0; j < inst.num_goods; ++j)
      if (plan.layer_class[j] != p) {
        old_to_new[j] = static_cast<int>(plan.kept[p].size());
        plan.kept[p].push_back(j);
      }
    if (plan.kept[p].empty()) continue;
    std::vector<std::pair<int, int>> sub_edges;
    for (auto [a, b] : edges)
      if (old_to_new[a] != -1 && old_to_new[b] != -1)
        sub_edges.push_back({old_to_new[a], old_to_new[b]});
    plan.part_td[p] =
        build_tree_decomposition(static_cast<int>(plan.kept[p].size()), sub_edges);
    plan.max_width = std::max(plan.max_width, plan.part_td[p]->width());
  }
  return plan;
}

// Exact optimum over the plan's range: best over parts of the optimum with
// that part's goods removed. Works for any reported valuations, including
// the zeroed instances used for payments.
inline Rational baker_range_optimum(const BakerPlan& plan, const Instance& inst) {
  Rational best(0);
  for (int p = 0; p < plan.parts; ++p) {
    if (plan.kept[p].empty()) continue;
    auto [sub, kept] = restrict_instance(inst, plan.kept[p]);
    Rational value =
        treewidth_optimum_value(sub, *plan.part_td[p], std::vector<int>(sub.num_goods, -1));
    best = std::max(best, value);
  }
  return best;
}

inline MechanismOutcome baker_allocate(const Instance& inst, const Rational& epsilon) {
  BakerPlan plan = make_baker_plan(inst, epsilon);
  int chosen = -1;
  Rational best(0);
  for (int p = 0; p < plan.parts; ++p) {
    Rational value(0);
    if (!plan.kept[p].empty()) {
      auto [sub, kept] = restrict_instance(inst, plan.kept[p]);
      value = treewidth_optimum_value(sub, *plan.part_td[p], std::vector<int>(sub.num_goods, -1));
    }
    if (chosen == -1 || value > best) {
      chosen = p;
      best = value;
    }
  }

  MechanismOutcome out;
  out.allocation.owner.assign(inst.num_goods, Allocation::kUnallocated);
  if (!plan.kept[chosen].empty()) {
    auto [sub, kept] = restrict_instance(inst, plan.kept[chosen]);
    SolveResult part = solve_treewidth(sub, *plan.part_td[chosen]);
    for (int idx = 0; idx < sub.num_goods; ++idx)
      out.allocation.owner[kept[idx]] = part.allocation.owner[idx];
  }
  out.range_welfare = best;
  if (welfare(inst, out.allocation) != best)
    throw std::logic_error("baker: reconstructed welfare mismatch");
  out.payments = vcg_payments(inst, out.allocation, [&plan](const Instance& sub) {
    return baker_range_optimum(plan, sub);
  });
  out.diagnostics["algorithm"] = "baker";
  out.diagnostics["k"] = std::to_string(plan.k);
  out.diagnostics["parts"] = std::to_string(plan.parts);
  out.diagnostics["chosen_part"] = std::to_string(chosen);
  out.diagnostics["max_width"] = std::to_string(plan.max_width);
  out.diagnostics["width_above_3k"] = plan.max_width > 3 * plan.k ? "true" : "false";
  return out;
}

}  // namespace hgca
