#pragma once

// Truthfulness harness: run a mechanism against a profile, then against
// systematic misreports by each player, comparing utilities computed with
// the player's true valuation. Mechanisms are deterministic or randomized
// with exactly computable expected utilities, so "profitable" is an exact
// rational comparison against a caller-chosen tolerance.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hgca/baker.hpp"
#include "hgca/midr.hpp"
#include "hgca/rational.hpp"
#include "hgca/rng.hpp"
#include "hgca/valuation.hpp"
#include "hgca/vcg.hpp"

namespace hgca {

struct MechanismEvaluation {
  std::vector<Rational> payments;
  // Exact expected value of the mechanism's (possibly random) allocation to
  // `player` under an arbitrary true valuation.
  std::function<Rational(int player, const HypergraphValuation& true_valuation)> expected_value;
};

using Mechanism = std::function<MechanismEvaluation(const Instance&)>;

inline Instance replace_valuation(const Instance& inst, int player, HypergraphValuation v) {
  std::vector<HypergraphValuation> vals = inst.valuations;
  vals.at(player) = std::move(v);
  return Instance::make(inst.num_players, inst.num_goods, std::move(vals), inst.support_graph);
}

inline Mechanism make_vcg_bruteforce_mechanism() {
  return [](const Instance& inst) {
    MechanismOutcome out = vcg_over_bruteforce(inst);
    MechanismEvaluation eval;
    eval.payments = out.payments;
    eval.expected_value = [alloc = out.allocation](int player, const HypergraphValuation& v) {
      return v.value(alloc.bundle_of(player));
    };
    return eval;
  };
}

inline Mechanism make_baker_mechanism(Rational epsilon) {
  return [epsilon](const Instance& inst) {
    MechanismOutcome out = baker_allocate(inst, epsilon);
    MechanismEvaluation eval;
    eval.payments = out.payments;
    eval.expected_value = [alloc = out.allocation](int player, const HypergraphValuation& v) {
      return v.value(alloc.bundle_of(player));
    };
    return eval;
  };
}

inline Mechanism make_midr_mechanism(MidrConfig cfg, std::uint64_t seed) {
  return [cfg, seed](const Instance& inst) {
    auto result = std::make_shared<MidrResult>(run_midr(inst, cfg, seed));
    MechanismEvaluation eval;
    eval.payments = result->payments;
    eval.expected_value = [result](int player, const HypergraphValuation& v) {
      return midr_expected_value(*result, player, v);
    };
    return eval;
  };
}

// Misreports for one player: a deterministic battery (weight scalings by
// 0, 1/2, 2 and single-edge deletions) plus seeded random valuations that
// respect the instance's support graph and rank.
using MisreportGenerator =
    std::function<std::vector<HypergraphValuation>(const Instance&, int player)>;

inline MisreportGenerator standard_misreports(int random_count, std::uint64_t seed) {
  if (random_count < 0) throw std::invalid_argument("standard_misreports: negative count");
  return [random_count, seed](const Instance& inst, int player) {
    const HypergraphValuation& v = inst.valuations[player];
    int m = inst.num_goods;
    std::vector<HypergraphValuation> out;
    for (Rational scale : {Rational(0), Rational(1, 2), Rational(2)}) {
      std::vector<Rational> weights = v.vertex_weights;
      for (auto& w : weights) w *= scale;
      std::vector<HyperEdge> edges = v.edges;
      for (auto& e : edges) e.weight *= scale;
      out.push_back(HypergraphValuation::make(m, std::move(weights), std::move(edges)));
    }
    for (std::size_t drop = 0; drop < v.edges.size(); ++drop) {
      std::vector<HyperEdge> edges;
      for (std::size_t e = 0; e < v.edges.size(); ++e)
        if (e != drop) edges.push_back(v.edges[e]);
      out.push_back(HypergraphValuation::make(m, v.vertex_weights, std::move(edges)));
    }
    int rank = inst.rank();
    auto support = instance_graph_edges(inst);
    for (int t = 0; t < random_count; ++t) {
      Rng rng = derived_rng(seed, (static_cast<std::uint64_t>(player) << 32) ^
                                      static_cast<std::uint64_t>(t));
      std::vector<Rational> weights(m);
      for (auto& w : weights) w = Rational(rng.next_below(11));
      std::vector<HyperEdge> edges;
      if (inst.support_graph) {
        for (auto [a, b] : support)
          if (rng.next_below(2) == 1)
            edges.push_back(HyperEdge{{a, b}, Rational(rng.next_below(11))});
      } else if (rank >= 2 && m >= 2) {
        std::uint64_t count = rng.next_below(static_cast<std::uint64_t>(2 * m) + 1);
        for (std::uint64_t e = 0; e < count; ++e) {
          int size = 2 + static_cast<int>(rng.next_below(
                             static_cast<std::uint64_t>(std::min(rank, m) - 1)));
          std::vector<int> goods;
          while (static_cast<int>(goods.size()) < size) {
            int g = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
            if (std::find(goods.begin(), goods.end(), g) == goods.end()) goods.push_back(g);
          }
          edges.push_back(HyperEdge{std::move(goods), Rational(rng.next_below(11))});
        }
      }
      out.push_back(HypergraphValuation::make(m, std::move(weights), std::move(edges)));
    }
    return out;
  };
}

struct Deviation {
  int player = -1;
  int misreport_index = -1;
  Rational truthful_utility;
  Rational deviating_utility;
  HypergraphValuation misreport;
};

// Returns the first misreport that beats truthful utility by more than
// `tol`, or nothing. Utilities always use the player's true valuation.
inline std::optional<Deviation> deviation_search(const Mechanism& mechanism, const Instance& inst,
                                                 const MisreportGenerator& misreports,
                                                 const Rational& tol) {
  MechanismEvaluation truthful = mechanism(inst);
  for (int i = 0; i < inst.num_players; ++i) {
    Rational base = truthful.expected_value(i, inst.valuations[i]) - truthful.payments[i];
    std::vector<HypergraphValuation> candidates = misreports(inst, i);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      Instance distorted = replace_valuation(inst, i, candidates[k]);
      MechanismEvaluation eval = mechanism(distorted);
      Rational utility = eval.expected_value(i, inst.valuations[i]) - eval.payments[i];
      if (utility > base + tol)
        return Deviation{i, static_cast<int>(k), base, utility, candidates[k]};
    }
  }
  return std::nullopt;
}

}  // namespace hgca
