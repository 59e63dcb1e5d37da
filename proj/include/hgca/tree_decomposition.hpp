#pragma once

// Tree decompositions of the support graph. build_tree_decomposition uses
// min-degree elimination (min-fill, then smallest index, as tie-breaks) and
// absorbs bags contained in a neighbor, so the result is small but only
// heuristically close to optimal width.

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hgca {

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;           // each sorted ascending
  std::vector<std::pair<int, int>> tree_edges;  // spanning tree on bag indices

  int width() const {
    int w = 0;
    for (const auto& bag : bags) w = std::max(w, static_cast<int>(bag.size()) - 1);
    return w;
  }
};

// nullopt when valid, otherwise a reason. Checks: every good in some bag,
// every graph edge inside some bag, occurrences of each good form a
// connected subtree, and tree_edges form a spanning tree.
inline std::optional<std::string> check_tree_decomposition(
    const TreeDecomposition& td, int num_goods, const std::vector<std::pair<int, int>>& edges) {
  int nb = static_cast<int>(td.bags.size());
  if (nb == 0) return "no bags";
  if (static_cast<int>(td.tree_edges.size()) != nb - 1) return "tree edge count is not bags-1";
  std::vector<std::vector<int>> adj(nb);
  for (auto [a, b] : td.tree_edges) {
    if (a < 0 || a >= nb || b < 0 || b >= nb || a == b) return "bad tree edge";
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(nb, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++count;
        queue.push_back(y);
      }
  }
  if (count != nb) return "tree is disconnected";

  std::vector<std::vector<int>> bags_of(num_goods);
  for (int b = 0; b < nb; ++b)
    for (int g : td.bags[b]) {
      if (g < 0 || g >= num_goods) return "bag contains out-of-range good";
      bags_of[g].push_back(b);
    }
  for (int g = 0; g < num_goods; ++g)
    if (bags_of[g].empty()) return "good " + std::to_string(g) + " in no bag";

  for (auto [a, b] : edges) {
    bool covered = false;
    for (int bag : bags_of[a]) {
      if (std::find(td.bags[bag].begin(), td.bags[bag].end(), b) != td.bags[bag].end()) {
        covered = true;
        break;
      }
    }
    if (!covered)
      return "edge {" + std::to_string(a) + "," + std::to_string(b) + "} in no bag";
  }

  for (int g = 0; g < num_goods; ++g) {
    std::vector<char> in_bag(nb, 0);
    for (int b : bags_of[g]) in_bag[b] = 1;
    std::vector<char> visited(nb, 0);
    std::deque<int> q{bags_of[g][0]};
    visited[bags_of[g][0]] = 1;
    int reached = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : adj[x])
        if (in_bag[y] && !visited[y]) {
          visited[y] = 1;
          ++reached;
          q.push_back(y);
        }
    }
    if (reached != static_cast<int>(bags_of[g].size()))
      return "good " + std::to_string(g) + " occurrences are disconnected";
  }
  return std::nullopt;
}

inline TreeDecomposition build_tree_decomposition(int num_goods,
                                                  const std::vector<std::pair<int, int>>& edges) {
  if (num_goods < 1) throw std::invalid_argument("tree decomposition: need at least one good");
  std::vector<std::set<int>> adj(num_goods);
  for (auto [a, b] : edges) {
    if (a < 0 || a >= num_goods || b < 0 || b >= num_goods)
      throw std::out_of_range("tree decomposition: edge endpoint out of range");
    if (a == b) continue;
    adj[a].insert(b);
    adj[b].insert(a);
  }

  std::vector<char> eliminated(num_goods, 0);
  std::vector<int> position(num_goods, -1);
  std::vector<std::vector<int>> bags;
  std::vector<std::vector<int>> neighbors_at_elimination(num_goods);

  for (int step = 0; step < num_goods; ++step) {
    int best = -1;
    long long best_degree = 0, best_fill = 0;
    for (int v = 0; v < num_goods; ++v) {
      if (eliminated[v]) continue;
      long long degree = static_cast<long long>(adj[v].size());
      if (best != -1 && degree > best_degree) continue;
      long long fill = 0;
      std::vector<int> nb(adj[v].begin(), adj[v].end());
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j)
          if (!adj[nb[i]].count(nb[j])) ++fill;
      if (best == -1 || degree < best_degree || (degree == best_degree && fill < best_fill)) {
        best = v;
        best_degree = degree;
        best_fill = fill;
      }
    }
    int v = best;
    std::vector<int> nb(adj[v].begin(), adj[v].end());
    neighbors_at_elimination[v] = nb;
    position[v] = step;
    std::vector<int> bag = nb;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    bags.push_back(std::move(bag));
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    for (int u : nb) adj[u].erase(v);
    adj[v].clear();
    eliminated[v] = 1;
  }

  // Bag of v attaches to the bag of its earliest-eliminated neighbor; roots
  // of separate components are chained afterwards.
  std::vector<int> order_to_vertex(num_goods);
  for (int v = 0; v < num_goods; ++v) order_to_vertex[position[v]] = v;
  std::vector<std::pair<int, int>> tree_edges;
  std::vector<int> roots;
  for (int step = 0; step < num_goods; ++step) {
    int v = order_to_vertex[step];
    const auto& nb = neighbors_at_elimination[v];
    if (nb.empty()) {
      roots.push_back(step);
      continue;
    }
    int parent = -1;
    for (int u : nb)
      if (parent == -1 || position[u] < position[parent]) parent = u;
    tree_edges.push_back({step, position[parent]});
  }
  for (std::size_t i = 1; i < roots.size(); ++i) tree_edges.push_back({roots[i - 1], roots[i]});

  // Absorb bags contained in a tree neighbor.
  int nb_count = static_cast<int>(bags.size());
  std::vector<std::set<int>> tadj(nb_count);
  for (auto [a, b] : tree_edges) {
    tadj[a].insert(b);
    tadj[b].insert(a);
  }
  std::vector<char> removed(nb_count, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < nb_count && !changed; ++i) {
      if (removed[i]) continue;
      for (int j : tadj[i]) {
        if (std::includes(bags[j].begin(), bags[j].end(), bags[i].begin(), bags[i].end())) {
          for (int other : tadj[i])
            if (other != j) {
              tadj[other].erase(i);
              tadj[other].insert(j);
              tadj[j].insert(other);
            }
          tadj[j].erase(i);
          tadj[i].clear();
          removed[i] = 1;
          changed = true;
          break;
        }
      }
    }
  }

  TreeDecomposition td;
  std::vector<int> new_index(nb_count, -1);
  for (int i = 0; i < nb_count; ++i)
    if (!removed[i]) {
      new_index[i] = static_cast<int>(td.bags.size());
      td.bags.push_back(bags[i]);
    }
  for (int i = 0; i < nb_count; ++i)
    if (!removed[i])
      for (int j : tadj[i])
        if (i < j) td.tree_edges.push_back({new_index[i], new_index[j]});
  return td;
}

}  // namespace hgca
