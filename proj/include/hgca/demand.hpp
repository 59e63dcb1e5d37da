#pragma once

// Demand oracle: argmax_S v(S) - p(S) for a hypergraph valuation and
// nonnegative item prices.
//
// Reduction to min s-t cut (maximum closure): source -> edge node with
// capacity w_e, edge node -> member good with effective infinite capacity,
// good -> sink with capacity max(0, p_j - w_j); positive margins w_j - p_j
// are collected directly. Optimal surplus = collected + sum_e w_e - mincut.
//
// The maximizers of a supermodular surplus form a lattice; both demand()
// and demand_bruteforce() return its maximum element (the union of all
// optimal bundles). That is the lexicographically smallest optimal bundle
// when bundles are compared good 0 first with "present" ordered before
// "absent" — the convention that also makes demand at all-zero prices
// return the full good set.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "hgca/rational.hpp"
#include "hgca/valuation.hpp"

namespace hgca {

struct PriceVector {
  std::vector<Rational> prices;

  static PriceVector make(std::vector<Rational> prices) {
    for (const auto& p : prices)
      if (p < 0) throw std::invalid_argument("prices: negative entry");
    return PriceVector{std::move(prices)};
  }
};

struct DemandResult {
  std::vector<int> bundle;
  Rational surplus;
};

namespace detail {

// Dense-graph Edmonds-Karp max flow over exact rationals.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : adj_(n) {}

  void add_edge(int from, int to, Rational cap) {
    adj_[from].push_back({to, std::move(cap), static_cast<int>(adj_[to].size())});
    adj_[to].push_back({from, Rational(0), static_cast<int>(adj_[from].size()) - 1});
  }

  Rational run(int s, int t) {
    Rational total = 0;
    for (;;) {
      std::vector<std::pair<int, int>> parent(adj_.size(), {-1, -1});
      std::deque<int> queue{s};
      parent[s] = {s, -1};
      while (!queue.empty() && parent[t].first == -1) {
        int u = queue.front();
        queue.pop_front();
        for (int a = 0; a < static_cast<int>(adj_[u].size()); ++a) {
          const Arc& arc = adj_[u][a];
          if (arc.cap > 0 && parent[arc.to].first == -1) {
            parent[arc.to] = {u, a};
            queue.push_back(arc.to);
          }
        }
      }
      if (parent[t].first == -1) return total;
      Rational push = -1;
      for (int v = t; v != s;) {
        auto [u, a] = parent[v];
        if (push < 0 || adj_[u][a].cap < push) push = adj_[u][a].cap;
        v = u;
      }
      for (int v = t; v != s;) {
        auto [u, a] = parent[v];
        Arc& arc = adj_[u][a];
        arc.cap -= push;
        adj_[arc.to][arc.rev].cap += push;
        v = u;
      }
      total += push;
    }
  }

  // Nodes with no residual path to t: the source side of the *maximum*
  // min cut (union over all min cuts).
  std::vector<char> side_not_reaching_sink(int t) const {
    std::vector<char> reaches(adj_.size(), 0);
    std::deque<int> queue{t};
    reaches[t] = 1;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      // Residual arc y -> x exists iff the arc stored at x pointing to y
      // has positive reverse capacity.
      for (const Arc& arc : adj_[x]) {
        int y = arc.to;
        if (!reaches[y] && adj_[y][arc.rev].cap > 0) {
          reaches[y] = 1;
          queue.push_back(y);
        }
      }
    }
    std::vector<char> side(adj_.size());
    for (std::size_t i = 0; i < adj_.size(); ++i) side[i] = !reaches[i];
    return side;
  }

 private:
  struct Arc {
    int to;
    Rational cap;
    int rev;
  };
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace detail

inline DemandResult demand(const HypergraphValuation& v, const PriceVector& p) {
  if (static_cast<int>(p.prices.size()) != v.num_goods)
    throw std::invalid_argument("demand: price vector length mismatch");
  for (const auto& q : p.prices)
    if (q < 0) throw std::invalid_argument("demand: negative price");

  int m = v.num_goods;
  int num_edges = static_cast<int>(v.edges.size());
  // Node layout: 0 = source, 1..num_edges = edge nodes, then goods, then sink.
  int source = 0, good0 = 1 + num_edges, sink = good0 + m;
  detail::MaxFlow network(sink + 1);
  Rational edge_total = 0;
  for (int e = 0; e < num_edges; ++e) {
    network.add_edge(source, 1 + e, v.edges[e].weight);
    edge_total += v.edges[e].weight;
  }
  Rational infinite = edge_total + 1;
  for (int e = 0; e < num_edges; ++e)
    for (int j : v.edges[e].goods) network.add_edge(1 + e, good0 + j, infinite);
  for (int j = 0; j < m; ++j) {
    Rational cost = p.prices[j] - v.vertex_weights[j];
    network.add_edge(good0 + j, sink, cost > 0 ? cost : Rational(0));
  }
  network.run(source, sink);
  std::vector<char> side = network.side_not_reaching_sink(sink);

  DemandResult result;
  for (int j = 0; j < m; ++j)
    if (side[good0 + j]) result.bundle.push_back(j);
  result.surplus = v.value(result.bundle);
  for (int j : result.bundle) result.surplus -= p.prices[j];
  return result;
}

inline DemandResult demand_bruteforce(const HypergraphValuation& v, const PriceVector& p) {
  if (static_cast<int>(p.prices.size()) != v.num_goods)
    throw std::invalid_argument("demand_bruteforce: price vector length mismatch");
  for (const auto& q : p.prices)
    if (q < 0) throw std::invalid_argument("demand_bruteforce: negative price");
  if (v.num_goods > 20) throw std::invalid_argument("demand_bruteforce: too many goods");

  int m = v.num_goods;
  std::vector<Rational> margin(m);
  for (int j = 0; j < m; ++j) margin[j] = v.vertex_weights[j] - p.prices[j];
  std::vector<std::uint64_t> edge_mask(v.edges.size(), 0);
  for (std::size_t e = 0; e < v.edges.size(); ++e)
    for (int j : v.edges[e].goods) edge_mask[e] |= 1ull << j;

  // Prefer the candidate whose lowest differing bit is present: keeps the
  // lattice-maximal optimal bundle, matching demand().
  auto lex_before = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t diff = a ^ b;
    std::uint64_t low = diff & (~diff + 1);
    return (a & low) != 0;
  };

  std::vector<Rational> surplus(std::size_t(1) << m);
  std::uint64_t best = 0;
  surplus[0] = 0;
  for (std::uint64_t mask = 1; mask < surplus.size(); ++mask) {
    std::uint64_t low = mask & (~mask + 1);
    int lowbit = 0;
    while (!(low >> lowbit & 1)) ++lowbit;
    Rational s = surplus[mask ^ low] + margin[lowbit];
    for (std::size_t e = 0; e < edge_mask.size(); ++e)
      if ((edge_mask[e] & low) && (edge_mask[e] & mask) == edge_mask[e]) s += v.edges[e].weight;
    surplus[mask] = std::move(s);
    if (surplus[mask] > surplus[best] || (surplus[mask] == surplus[best] && lex_before(mask, best)))
      best = mask;
  }

  DemandResult result;
  for (int j = 0; j < m; ++j)
    if (best >> j & 1) result.bundle.push_back(j);
  result.surplus = surplus[best];
  return result;
}

}  // namespace hgca
