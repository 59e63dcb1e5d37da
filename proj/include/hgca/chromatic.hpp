#pragma once

// Coloring-based mechanism for rank-2 instances over a public support
// graph. Support edges are greedy-colored so that any two same-colored
// edges are at distance >= 3 in the line graph (no shared endpoint, no
// connecting support edge). For each color class the factored surrogate
// objective - per class edge, the best way to place its two endpoints; per
// uncovered good, the best single placement - is maximized exactly, and the
// best class wins. Every color class's surrogate covers the full vertex
// weight of any allocation, and the class holding an edge covers that
// edge's weight, so (best surrogate) * (number of colors) >= optimum, and
// realized welfare only exceeds the surrogate. Clarke payments are charged
// inside the surrogate objective, which keeps them in [0, v_i(bundle_i)].

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hgca/rational.hpp"
#include "hgca/valuation.hpp"
#include "hgca/vcg.hpp"

namespace hgca {

struct ChromaticPlan {
  std::vector<std::pair<int, int>> support_edges;
  std::vector<int> color;  // per support edge
  int colors_used = 1;
};

inline ChromaticPlan make_chromatic_plan(const Instance& inst) {
  if (!inst.support_graph)
    throw std::invalid_argument("chromatic: instance needs a support graph");
  if (inst.rank() > 2) throw std::invalid_argument("chromatic: rank above 2");
  ChromaticPlan plan;
  plan.support_edges = *inst.support_graph;
  int ne = static_cast<int>(plan.support_edges.size());
  plan.color.assign(ne, -1);
  if (ne == 0) return plan;

  // Line-graph adjacency, then square it: conflict when sharing an endpoint
  // or both touching a common support edge.
  std::vector<std::vector<bool>> touches(ne, std::vector<bool>(ne, false));
  auto shares_endpoint = [&](int e, int f) {
    auto [a, b] = plan.support_edges[e];
    auto [c, d] = plan.support_edges[f];
    return a == c || a == d || b == c || b == d;
  };
  for (int e = 0; e < ne; ++e)
    for (int f = e + 1; f < ne; ++f)
      if (shares_endpoint(e, f)) touches[e][f] = touches[f][e] = true;
  std::vector<std::vector<bool>> conflict = touches;
  for (int e = 0; e < ne; ++e)
    for (int f = e + 1; f < ne; ++f) {
      if (conflict[e][f]) continue;
      for (int g = 0; g < ne; ++g)
        if (touches[e][g] && touches[g][f]) {
          conflict[e][f] = conflict[f][e] = true;
          break;
        }
    }

  std::vector<int> degree(ne, 0), order(ne);
  for (int e = 0; e < ne; ++e)
    for (int f = 0; f < ne; ++f) degree[e] += conflict[e][f] ? 1 : 0;
  for (int e = 0; e < ne; ++e) order[e] = e;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return degree[a] != degree[b] ? degree[a] > degree[b] : a < b;
  });
  int colors = 0;
  for (int e : order) {
    std::vector<bool> used(ne + 1, false);
    for (int f = 0; f < ne; ++f)
      if (conflict[e][f] && plan.color[f] != -1) used[plan.color[f]] = true;
    int c = 0;
    while (used[c]) ++c;
    plan.color[e] = c;
    colors = std::max(colors, c + 1);
  }
  plan.colors_used = colors;
  return plan;
}

namespace detail {

struct ChromaticClassSolution {
  Rational surrogate{0};
  Allocation allocation;
  std::vector<Rational> share;  // per-player surrogate contribution
};

// Exact maximizer of the factored surrogate for one color class. All ties
// resolve toward smaller player indices; equal joint and split values keep
// the joint placement.
inline ChromaticClassSolution solve_chromatic_class(const Instance& inst,
                                                    const ChromaticPlan& plan, int cls) {
  int n = inst.num_players, m = inst.num_goods;
  std::vector<std::map<std::pair<int, int>, Rational>> pair_weight(n);
  for (int i = 0; i < n; ++i)
    for (const auto& e : inst.valuations[i].edges)
      pair_weight[i][{e.goods[0], e.goods[1]}] = e.weight;

  ChromaticClassSolution out;
  out.allocation.owner.assign(m, Allocation::kUnallocated);
  out.share.assign(n, Rational(0));
  std::vector<bool> covered(m, false);
  auto best_vertex = [&](int j) {
    int who = 0;
    for (int i = 1; i < n; ++i)
      if (inst.valuations[i].vertex_weights[j] > inst.valuations[who].vertex_weights[j]) who = i;
    return who;
  };
  for (std::size_t e = 0; e < plan.support_edges.size(); ++e) {
    if (plan.color[e] != cls) continue;
    auto [u, v] = plan.support_edges[e];
    covered[u] = covered[v] = true;
    int joint = 0;
    Rational joint_value;
    for (int i = 0; i < n; ++i) {
      Rational value =
          inst.valuations[i].vertex_weights[u] + inst.valuations[i].vertex_weights[v];
      auto it = pair_weight[i].find({u, v});
      if (it != pair_weight[i].end()) value += it->second;
      if (i == 0 || value > joint_value) {
        joint = i;
        joint_value = value;
      }
    }
    int iu = best_vertex(u), iv = best_vertex(v);
    Rational split_value =
        inst.valuations[iu].vertex_weights[u] + inst.valuations[iv].vertex_weights[v];
    if (joint_value >= split_value) {
      out.allocation.owner[u] = out.allocation.owner[v] = joint;
      out.share[joint] += joint_value;
      out.surrogate += joint_value;
    } else {
      out.allocation.owner[u] = iu;
      out.allocation.owner[v] = iv;
      out.share[iu] += inst.valuations[iu].vertex_weights[u];
      out.share[iv] += inst.valuations[iv].vertex_weights[v];
      out.surrogate += split_value;
    }
  }
  for (int j = 0; j < m; ++j) {
    if (covered[j]) continue;
    int who = best_vertex(j);
    out.allocation.owner[j] = who;
    out.share[who] += inst.valuations[who].vertex_weights[j];
    out.surrogate += inst.valuations[who].vertex_weights[j];
  }
  return out;
}

}  // namespace detail

// Best class and its surrogate solution; ties pick the smallest class.
inline std::pair<int, detail::ChromaticClassSolution> chromatic_best_class(
    const Instance& inst, const ChromaticPlan& plan) {
  int chosen = -1;
  detail::ChromaticClassSolution best;
  for (int c = 0; c < plan.colors_used; ++c) {
    auto sol = detail::solve_chromatic_class(inst, plan, c);
    if (chosen == -1 || sol.surrogate > best.surrogate) {
      chosen = c;
      best = std::move(sol);
    }
  }
  return {chosen, std::move(best)};
}

inline MechanismOutcome chromatic_mechanism(const Instance& inst) {
  ChromaticPlan plan = make_chromatic_plan(inst);
  auto [chosen, sol] = chromatic_best_class(inst, plan);
  MechanismOutcome out;
  out.allocation = sol.allocation;
  out.range_welfare = sol.surrogate;
  out.payments.resize(inst.num_players);
  for (int i = 0; i < inst.num_players; ++i) {
    Instance without = zero_player(inst, i);
    Rational alternative = chromatic_best_class(without, plan).second.surrogate;
    out.payments[i] = alternative - (sol.surrogate - sol.share[i]);
  }
  out.diagnostics["algorithm"] = "chromatic";
  out.diagnostics["colors_used"] = std::to_string(plan.colors_used);
  out.diagnostics["chosen_class"] = std::to_string(chosen);
  return out;
}

}  // namespace hgca
