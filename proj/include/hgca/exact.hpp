#pragma once

// Exact welfare maximization: brute force over total allocations, and
// dynamic programming over a tree decomposition for rank-2 instances.
// Both return the lexicographically smallest owner vector among optima,
// so results can be compared for equality, not just equal value.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hgca/rational.hpp"
#include "hgca/tree_decomposition.hpp"
#include "hgca/valuation.hpp"

namespace hgca {

struct SolveResult {
  Allocation allocation;
  Rational welfare;
};

namespace detail {

inline void check_fixed(const Instance& inst, const std::vector<int>& fixed) {
  if (static_cast<int>(fixed.size()) != inst.num_goods)
    throw std::invalid_argument("fixed assignment: length mismatch");
  for (int f : fixed)
    if (f != -1 && (f < 0 || f >= inst.num_players))
      throw std::out_of_range("fixed assignment: player out of range");
}

}  // namespace detail

// Exact optimum over all total allocations that extend `fixed` (-1 = free).
// Enumeration is lexicographic over the owner vector with strict
// improvement, so the first optimum found is the lexicographically
// smallest. Requires n^(free goods) <= 10^7.
inline SolveResult solve_bruteforce_constrained(const Instance& inst, const std::vector<int>& fixed) {
  detail::check_fixed(inst, fixed);
  int n = inst.num_players, m = inst.num_goods;

  if (n == 1) {
    Allocation alloc{std::vector<int>(m, 0)};
    return {alloc, welfare(inst, alloc)};
  }
  if (m > 62) throw std::invalid_argument("solve_bruteforce: too many goods");
  double combos = 1;
  for (int g = 0; g < m; ++g)
    if (fixed[g] == -1) combos *= n;
  if (combos > 1e7) throw std::invalid_argument("solve_bruteforce: search space exceeds 10^7");

  // triggers[p][g]: edges of player p whose largest good is g, as bitmasks.
  std::vector<std::vector<std::vector<std::pair<std::uint64_t, Rational>>>> triggers(
      n, std::vector<std::vector<std::pair<std::uint64_t, Rational>>>(m));
  for (int p = 0; p < n; ++p)
    for (const auto& e : inst.valuations[p].edges) {
      std::uint64_t mask = 0;
      for (int j : e.goods) mask |= 1ull << j;
      triggers[p][e.goods.back()].push_back({mask, e.weight});
    }

  std::vector<int> owner(m, -1);
  std::vector<std::uint64_t> owned(n, 0);
  std::optional<Rational> best;
  std::vector<int> best_owner;

  auto dfs = [&](auto&& self, int g, Rational current) -> void {
    if (g == m) {
      if (!best || current > *best) {
        best = current;
        best_owner = owner;
      }
      return;
    }
    int lo = fixed[g] == -1 ? 0 : fixed[g];
    int hi = fixed[g] == -1 ? n - 1 : fixed[g];
    for (int p = lo; p <= hi; ++p) {
      owner[g] = p;
      owned[p] |= 1ull << g;
      Rational next = current + inst.valuations[p].vertex_weights[g];
      for (const auto& [mask, weight] : triggers[p][g])
        if ((owned[p] & mask) == mask) next += weight;
      self(self, g + 1, std::move(next));
      owned[p] &= ~(1ull << g);
      owner[g] = -1;
    }
  };
  dfs(dfs, 0, Rational(0));

  return {Allocation{best_owner}, *best};
}

inline SolveResult solve_bruteforce(const Instance& inst) {
  return solve_bruteforce_constrained(inst, std::vector<int>(inst.num_goods, -1));
}

namespace detail {

// Prepared dynamic program over a rooted tree decomposition. The value of
// a subtree given a bag assignment counts vertex weights of all goods in
// the subtree's bags and edges with both endpoints there; each child
// contribution subtracts the value of the parent/child intersection to
// cancel double counting.
class TreewidthDp {
 public:
  TreewidthDp(const Instance& inst, const TreeDecomposition& td) : inst_(inst), td_(td) {
    int m = inst.num_goods;
    if (m < 1) throw std::invalid_argument("solve_treewidth: need at least one good");
    if (inst.rank() > 2) throw std::invalid_argument("solve_treewidth: rank above 2");
    std::vector<std::pair<int, int>> to_cover;
    for (const auto& v : inst.valuations)
      for (const auto& e : v.edges) to_cover.push_back({e.goods[0], e.goods[1]});
    if (inst.support_graph)
      for (auto e : *inst.support_graph) to_cover.push_back(e);
    if (auto reason = check_tree_decomposition(td, m, to_cover))
      throw std::invalid_argument("solve_treewidth: invalid decomposition: " + *reason);

    int nb = static_cast<int>(td.bags.size());
    std::vector<std::vector<int>> adj(nb);
    for (auto [a, b] : td.tree_edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    parent_.assign(nb, -1);
    std::vector<int> stack{0};
    std::vector<char> seen(nb, 0);
    seen[0] = 1;
    std::vector<int> pre;
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      pre.push_back(b);
      for (int c : adj[b])
        if (!seen[c]) {
          seen[c] = 1;
          parent_[c] = b;
          stack.push_back(c);
        }
    }
    post_order_ = pre;
    std::reverse(post_order_.begin(), post_order_.end());
    children_.assign(nb, {});
    for (int b = 0; b < nb; ++b)
      if (parent_[b] != -1) children_[parent_[b]].push_back(b);

    pair_weight_.assign(inst.num_players, {});
    for (int p = 0; p < inst.num_players; ++p)
      for (const auto& e : inst.valuations[p].edges)
        pair_weight_[p][{e.goods[0], e.goods[1]}] = e.weight;

    for (int b = 0; b < nb; ++b) {
      double table = 1;
      for (std::size_t i = 0; i < td.bags[b].size(); ++i) table *= inst.num_players;
      if (table > 1e7) throw std::invalid_argument("solve_treewidth: decomposition too wide");
    }
  }

  // Optimal total welfare over all allocations extending `fixed`.
  Rational optimum(const std::vector<int>& fixed) const {
    check_fixed(inst_, fixed);
    int nb = static_cast<int>(td_.bags.size());
    std::vector<std::vector<std::optional<Rational>>> table(nb);
    for (int b : post_order_) {
      const auto& bag = td_.bags[b];
      int size = static_cast<int>(bag.size());
      std::size_t keys = 1;
      for (int i = 0; i < size; ++i) keys *= inst_.num_players;

      // Project each child onto its intersection with this bag.
      std::vector<std::vector<int>> shared(children_[b].size());
      std::vector<std::vector<std::optional<Rational>>> proj(children_[b].size());
      for (std::size_t ci = 0; ci < children_[b].size(); ++ci) {
        int c = children_[b][ci];
        const auto& cbag = td_.bags[c];
        std::vector<int> inter;
        std::vector<int> inter_pos_in_child;
        for (int i = 0; i < static_cast<int>(cbag.size()); ++i)
          if (std::binary_search(bag.begin(), bag.end(), cbag[i])) {
            inter.push_back(cbag[i]);
            inter_pos_in_child.push_back(i);
          }
        shared[ci] = inter;
        std::size_t ikeys = 1;
        for (std::size_t i = 0; i < inter.size(); ++i) ikeys *= inst_.num_players;
        proj[ci].assign(ikeys, std::nullopt);
        std::vector<int> assign(cbag.size());
        for (std::size_t key = 0; key < table[c].size(); ++key) {
          if (!table[c][key]) continue;
          std::size_t rest = key;
          for (std::size_t i = 0; i < cbag.size(); ++i) {
            assign[i] = static_cast<int>(rest % inst_.num_players);
            rest /= inst_.num_players;
          }
          std::size_t ikey = 0;
          for (std::size_t i = inter.size(); i-- > 0;)
            ikey = ikey * inst_.num_players + assign[inter_pos_in_child[i]];
          if (!proj[ci][ikey] || *table[c][key] > *proj[ci][ikey]) proj[ci][ikey] = table[c][key];
        }
        std::vector<int> iassign(inter.size());
        for (std::size_t ikey = 0; ikey < proj[ci].size(); ++ikey) {
          if (!proj[ci][ikey]) continue;
          std::size_t rest = ikey;
          for (std::size_t i = 0; i < inter.size(); ++i) {
            iassign[i] = static_cast<int>(rest % inst_.num_players);
            rest /= inst_.num_players;
          }
          *proj[ci][ikey] -= local_value(inter, iassign);
        }
      }

      table[b].assign(keys, std::nullopt);
      std::vector<int> assign(size, 0);
      for (int i = 0; i < size; ++i)
        if (fixed[bag[i]] != -1) assign[i] = fixed[bag[i]];
      for (;;) {
        Rational total = local_value(bag, assign);
        bool feasible = true;
        for (std::size_t ci = 0; ci < children_[b].size() && feasible; ++ci) {
          std::size_t ikey = 0;
          const auto& inter = shared[ci];
          for (std::size_t i = inter.size(); i-- > 0;) {
            int pos = static_cast<int>(std::lower_bound(bag.begin(), bag.end(), inter[i]) -
                                       bag.begin());
            ikey = ikey * inst_.num_players + assign[pos];
          }
          if (!proj[ci][ikey]) {
            feasible = false;
            break;
          }
          total += *proj[ci][ikey];
        }
        if (feasible) {
          std::size_t key = 0;
          for (int i = size; i-- > 0;) key = key * inst_.num_players + assign[i];
          table[b][key] = std::move(total);
        }
        // Advance the assignment, skipping fixed positions.
        int i = 0;
        for (; i < size; ++i) {
          if (fixed[bag[i]] != -1) continue;
          if (++assign[i] < inst_.num_players) break;
          assign[i] = 0;
        }
        if (i == size) break;
      }
      for (int c : children_[b]) table[c].clear();
    }

    std::optional<Rational> best;
    for (const auto& entry : table[0])
      if (entry && (!best || *entry > *best)) best = entry;
    if (!best) throw std::logic_error("solve_treewidth: empty root table");
    return *best;
  }

  // Lexicographically smallest optimal owner vector extending `fixed`,
  // found by fixing goods greedily and re-running the value computation.
  SolveResult solve(const std::vector<int>& initial_fixed) const {
    Rational opt = optimum(initial_fixed);
    std::vector<int> fixed = initial_fixed;
    for (int g = 0; g < inst_.num_goods; ++g) {
      if (fixed[g] != -1) continue;
      for (int p = 0; p < inst_.num_players; ++p) {
        fixed[g] = p;
        if (optimum(fixed) == opt) break;
        fixed[g] = -1;
      }
      if (fixed[g] == -1) throw std::logic_error("solve_treewidth: reconstruction failed");
    }
    return {Allocation{fixed}, opt};
  }

 private:
  Rational local_value(const std::vector<int>& goods, const std::vector<int>& assign) const {
    Rational total = 0;
    for (std::size_t i = 0; i < goods.size(); ++i) {
      total += inst_.valuations[assign[i]].vertex_weights[goods[i]];
      for (std::size_t j = i + 1; j < goods.size(); ++j) {
        if (assign[i] != assign[j]) continue;
        auto it = pair_weight_[assign[i]].find({goods[i], goods[j]});
        if (it != pair_weight_[assign[i]].end()) total += it->second;
      }
    }
    return total;
  }

  const Instance& inst_;
  const TreeDecomposition& td_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> post_order_;
  std::vector<std::map<std::pair<int, int>, Rational>> pair_weight_;
};

}  // namespace detail

inline Rational treewidth_optimum_value(const Instance& inst, const TreeDecomposition& td,
                                        const std::vector<int>& fixed) {
  return detail::TreewidthDp(inst, td).optimum(fixed);
}

inline SolveResult solve_treewidth_constrained(const Instance& inst, const TreeDecomposition& td,
                                               const std::vector<int>& fixed) {
  return detail::TreewidthDp(inst, td).solve(fixed);
}

inline SolveResult solve_treewidth(const Instance& inst, const TreeDecomposition& td) {
  return solve_treewidth_constrained(inst, td, std::vector<int>(inst.num_goods, -1));
}

}  // namespace hgca
