#pragma once

// Core model: hypergraph valuations, instances, allocations.
//
// A valuation over goods {0..m-1} is
//   v(S) = sum_{j in S} vertex_weights[j] + sum_{e subset of S} weight(e),
// with all weights nonnegative. Its rank is the largest edge size (1 when
// there are no edges). Nonnegative weights make v monotone and supermodular.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hgca/rational.hpp"
#include "hgca/rng.hpp"

namespace hgca {

struct HyperEdge {
  std::vector<int> goods;
  Rational weight;
};

// Plain data plus a validating factory. make() canonicalizes: edge good
// lists sorted, singleton edges folded into vertex weights, zero-weight
// edges dropped, duplicate good sets merged, edges sorted lexicographically.
// Tests that need an invalid state (e.g. a negative edge weight) aggregate-
// initialize the struct directly.
struct HypergraphValuation {
  int num_goods = 0;
  std::vector<Rational> vertex_weights;
  std::vector<HyperEdge> edges;
  int rank = 1;

  static HypergraphValuation make(int num_goods, std::vector<Rational> vertex_weights,
                                  std::vector<HyperEdge> raw_edges) {
    if (num_goods < 0) throw std::invalid_argument("valuation: negative number of goods");
    if (static_cast<int>(vertex_weights.size()) != num_goods)
      throw std::invalid_argument("valuation: vertex weight count does not match number of goods");
    for (int j = 0; j < num_goods; ++j)
      if (vertex_weights[j] < 0)
        throw std::invalid_argument("valuation: negative vertex weight at good " + std::to_string(j));

    std::map<std::vector<int>, Rational> merged;
    for (auto& e : raw_edges) {
      if (e.weight < 0) throw std::invalid_argument("valuation: negative edge weight");
      if (e.goods.empty()) throw std::invalid_argument("valuation: empty edge");
      std::vector<int> goods = e.goods;
      std::sort(goods.begin(), goods.end());
      for (std::size_t i = 0; i < goods.size(); ++i) {
        if (goods[i] < 0 || goods[i] >= num_goods)
          throw std::out_of_range("valuation: edge good index " + std::to_string(goods[i]) +
                                  " out of range");
        if (i > 0 && goods[i] == goods[i - 1])
          throw std::invalid_argument("valuation: duplicate good in edge");
      }
      if (goods.size() == 1) {
        vertex_weights[goods[0]] += e.weight;
        continue;
      }
      if (e.weight == 0) continue;
      merged[goods] += e.weight;
    }

    HypergraphValuation v;
    v.num_goods = num_goods;
    v.vertex_weights = std::move(vertex_weights);
    v.rank = 1;
    for (auto& [goods, weight] : merged) {
      if (weight == 0) continue;
      v.rank = std::max(v.rank, static_cast<int>(goods.size()));
      v.edges.push_back(HyperEdge{goods, weight});
    }
    return v;
  }

  // v(S) for S given as a set of good indices.
  Rational value(const std::vector<int>& bundle) const {
    std::vector<char> in(num_goods, 0);
    Rational total = 0;
    for (int j : bundle) {
      if (j < 0 || j >= num_goods)
        throw std::out_of_range("value: good index " + std::to_string(j) + " out of range");
      if (in[j]) throw std::invalid_argument("value: duplicate good in bundle");
      in[j] = 1;
      total += vertex_weights[j];
    }
    for (const auto& e : edges) {
      bool contained = true;
      for (int j : e.goods)
        if (!in[j]) {
          contained = false;
          break;
        }
      if (contained) total += e.weight;
    }
    return total;
  }

  // Same over a bitmask; requires num_goods <= 62.
  Rational value_mask(std::uint64_t mask) const {
    if (num_goods > 62) throw std::invalid_argument("value_mask: too many goods for bitmask form");
    Rational total = 0;
    for (int j = 0; j < num_goods; ++j)
      if (mask >> j & 1) total += vertex_weights[j];
    for (const auto& e : edges) {
      std::uint64_t em = 0;
      for (int j : e.goods) em |= 1ull << j;
      if ((mask & em) == em) total += e.weight;
    }
    return total;
  }

  Rational total_value() const {
    std::vector<int> all(num_goods);
    for (int j = 0; j < num_goods; ++j) all[j] = j;
    return value(all);
  }
};

inline Rational value(const HypergraphValuation& v, const std::vector<int>& bundle) {
  return v.value(bundle);
}

struct Instance {
  int num_players = 0;
  int num_goods = 0;
  std::vector<HypergraphValuation> valuations;
  // Optional undirected simple graph on goods; when present, every size-2
  // valuation edge must be one of its edges.
  std::optional<std::vector<std::pair<int, int>>> support_graph;

  static Instance make(int num_players, int num_goods, std::vector<HypergraphValuation> valuations,
                       std::optional<std::vector<std::pair<int, int>>> support_graph = std::nullopt) {
    if (num_players < 1) throw std::invalid_argument("instance: need at least one player");
    if (num_goods < 0) throw std::invalid_argument("instance: negative number of goods");
    if (static_cast<int>(valuations.size()) != num_players)
      throw std::invalid_argument("instance: valuation count does not match number of players");
    for (const auto& v : valuations)
      if (v.num_goods != num_goods)
        throw std::invalid_argument("instance: valuation good count mismatch");

    Instance inst;
    inst.num_players = num_players;
    inst.num_goods = num_goods;
    inst.valuations = std::move(valuations);
    if (support_graph) {
      std::set<std::pair<int, int>> canon;
      for (auto [a, b] : *support_graph) {
        if (a < 0 || a >= num_goods || b < 0 || b >= num_goods)
          throw std::out_of_range("instance: support edge endpoint out of range");
        if (a == b) throw std::invalid_argument("instance: support self-loop");
        canon.insert({std::min(a, b), std::max(a, b)});
      }
      for (int i = 0; i < num_players; ++i)
        for (const auto& e : inst.valuations[i].edges)
          if (e.goods.size() == 2 && !canon.count({e.goods[0], e.goods[1]}))
            throw std::invalid_argument("instance: player " + std::to_string(i) +
                                        " has a pair edge outside the support graph");
      inst.support_graph = std::vector<std::pair<int, int>>(canon.begin(), canon.end());
    }
    return inst;
  }

  int rank() const {
    int r = 1;
    for (const auto& v : valuations) r = std::max(r, v.rank);
    return r;
  }
};

// Ordered partial allocation: owner[j] is a player index or kUnallocated.
struct Allocation {
  static constexpr int kUnallocated = -1;
  std::vector<int> owner;

  std::vector<int> bundle_of(int player) const {
    std::vector<int> bundle;
    for (int j = 0; j < static_cast<int>(owner.size()); ++j)
      if (owner[j] == player) bundle.push_back(j);
    return bundle;
  }
};

inline void check_allocation(const Instance& inst, const Allocation& alloc) {
  if (static_cast<int>(alloc.owner.size()) != inst.num_goods)
    throw std::invalid_argument("allocation: length does not match number of goods");
  for (int o : alloc.owner)
    if (o != Allocation::kUnallocated && (o < 0 || o >= inst.num_players))
      throw std::out_of_range("allocation: owner index out of range");
}

inline Rational welfare(const Instance& inst, const Allocation& alloc) {
  check_allocation(inst, alloc);
  Rational total = 0;
  for (int i = 0; i < inst.num_players; ++i) total += inst.valuations[i].value(alloc.bundle_of(i));
  return total;
}

// Randomized supermodularity check: samples triples (S, j, k) with j, k not
// in S and tests v(S+j+k) - v(S+j) >= v(S+k) - v(S). Nonnegative weights
// guarantee this; a false return exhibits a violation (e.g. an injected
// negative edge weight).
inline bool is_supermodular_witness(const HypergraphValuation& v, int trials, std::uint64_t seed) {
  if (v.num_goods < 2) return true;
  if (v.num_goods > 62) throw std::invalid_argument("is_supermodular_witness: too many goods");
  Rng rng(seed);
  std::uint64_t full = v.num_goods == 62 ? ~0ull >> 2 : (1ull << v.num_goods) - 1;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t s;
    int j, k;
    do {
      s = rng.next_u64() & full;
      j = static_cast<int>(rng.next_below(v.num_goods));
      k = static_cast<int>(rng.next_below(v.num_goods));
    } while (j == k || (s >> j & 1) || (s >> k & 1));
    Rational base = v.value_mask(s);
    Rational with_j = v.value_mask(s | 1ull << j);
    Rational with_k = v.value_mask(s | 1ull << k);
    Rational with_both = v.value_mask(s | 1ull << j | 1ull << k);
    if (with_both - with_j < with_k - base) return false;
  }
  return true;
}

// Replaces player i's valuation with the all-zero valuation.
inline Instance zero_player(const Instance& inst, int player) {
  if (player < 0 || player >= inst.num_players) throw std::out_of_range("zero_player: bad player");
  std::vector<HypergraphValuation> vals = inst.valuations;
  vals[player] =
      HypergraphValuation::make(inst.num_goods, std::vector<Rational>(inst.num_goods, 0), {});
  return Instance::make(inst.num_players, inst.num_goods, std::move(vals), inst.support_graph);
}

// Undirected graph on goods the algorithms must respect: the support graph
// when present, otherwise the union of all size-2 valuation edges. Sorted,
// deduplicated, endpoints ordered.
inline std::vector<std::pair<int, int>> instance_graph_edges(const Instance& inst) {
  if (inst.support_graph) return *inst.support_graph;
  std::set<std::pair<int, int>> canon;
  for (const auto& v : inst.valuations)
    for (const auto& e : v.edges)
      if (e.goods.size() == 2) canon.insert({e.goods[0], e.goods[1]});
  return {canon.begin(), canon.end()};
}

// Instance induced on a subset of goods, relabeled 0..|kept|-1 in the given
// order. Valuation edges with any dropped endpoint disappear; the support
// graph is induced. Returns the instance and the kept good ids (new -> old).
inline std::pair<Instance, std::vector<int>> restrict_instance(const Instance& inst,
                                                               const std::vector<int>& kept) {
  std::vector<int> old_to_new(inst.num_goods, -1);
  for (int idx = 0; idx < static_cast<int>(kept.size()); ++idx) {
    int g = kept[idx];
    if (g < 0 || g >= inst.num_goods) throw std::out_of_range("restrict_instance: bad good");
    if (old_to_new[g] != -1) throw std::invalid_argument("restrict_instance: duplicate good");
    old_to_new[g] = idx;
  }
  std::vector<HypergraphValuation> vals;
  for (const auto& v : inst.valuations) {
    std::vector<Rational> weights(kept.size());
    for (std::size_t idx = 0; idx < kept.size(); ++idx) weights[idx] = v.vertex_weights[kept[idx]];
    std::vector<HyperEdge> edges;
    for (const auto& e : v.edges) {
      std::vector<int> goods;
      bool all_kept = true;
      for (int j : e.goods) {
        if (old_to_new[j] == -1) {
          all_kept = false;
          break;
        }
        goods.push_back(old_to_new[j]);
      }
      if (all_kept) edges.push_back(HyperEdge{goods, e.weight});
    }
    vals.push_back(
        HypergraphValuation::make(static_cast<int>(kept.size()), std::move(weights), std::move(edges)));
  }
  std::optional<std::vector<std::pair<int, int>>> support;
  if (inst.support_graph) {
    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : *inst.support_graph)
      if (old_to_new[a] != -1 && old_to_new[b] != -1)
        edges.push_back({old_to_new[a], old_to_new[b]});
    support = std::move(edges);
  }
  return {Instance::make(inst.num_players, static_cast<int>(kept.size()), std::move(vals), support),
          kept};
}

}  // namespace hgca
