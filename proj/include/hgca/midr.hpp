#pragma once

// Truthful-in-expectation auction via the supply-B configuration LP.
// Pipeline: scale every valuation to its proxy (the exact expected value
// under independent 1/B retention), solve the configuration LP by demand-
// oracle pricing, express y*/alpha as a convex combination of integral
// configurations, sample one, and resolve per-good conflicts so each
// claimant of a good keeps it with probability exactly 1/B. Expected
// welfare is f(y*)/alpha >= OPT/(alpha * B^r); payments charge each
// player's externality on expected proxy welfare, so truthful reporting
// maximizes expected utility.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hgca/column_generation.hpp"
#include "hgca/demand.hpp"
#include "hgca/lp.hpp"
#include "hgca/rational.hpp"
#include "hgca/rng.hpp"
#include "hgca/simplex.hpp"
#include "hgca/valuation.hpp"

namespace hgca {

struct MidrConfig {
  int B = 1;
  Rational alpha{2};

  // B = ceil(log2 m) + 1 and alpha = 2; then alpha^(B+1) >= 4m > m.
  static MidrConfig defaults_for(int num_goods) {
    MidrConfig cfg;
    cfg.B = ceil_log2(num_goods) + 1;
    cfg.alpha = Rational(2);
    return cfg;
  }

  void validate(int num_goods) const {
    if (B < ceil_log2(num_goods) + 1)
      throw std::invalid_argument("midr config: B below ceil(log2 m) + 1");
    if (alpha <= Rational(1)) throw std::invalid_argument("midr config: alpha must exceed 1");
    if (rational_pow(alpha, B + 1) < Rational(num_goods))
      throw std::invalid_argument("midr config: alpha^(B+1) below m");
  }
};

// Expected value under independent 1/B retention of each good: vertex
// weights scale by 1/B, an edge of size s by 1/B^s.
inline HypergraphValuation proxy_valuation(const HypergraphValuation& v, int B) {
  if (B < 1) throw std::invalid_argument("proxy_valuation: B must be >= 1");
  std::vector<Rational> weights = v.vertex_weights;
  for (auto& w : weights) w /= B;
  std::vector<HyperEdge> edges = v.edges;
  for (auto& e : edges) e.weight /= rational_pow(Rational(B), static_cast<int>(e.goods.size()));
  return HypergraphValuation::make(v.num_goods, std::move(weights), std::move(edges));
}

struct ConfigEntry {
  int player = 0;
  std::vector<int> bundle;
  Rational y{0};
};

struct ConfigLpSolution {
  std::vector<ConfigEntry> columns;  // support of y* (y > 0)
  Rational objective{0};             // f(y*) in proxy terms
  std::vector<Rational> player_duals;
  std::vector<Rational> good_duals;
};

// Configuration LP: max sum v'_i(S) y_iS subject to sum_S y_iS <= 1 per
// player and sum_{i, S containing j} y_iS <= B per good. Solved by column
// generation; the pricing problem for duals (u, q) is a demand query on the
// proxy valuation at prices q, improving while surplus exceeds u_i.
inline ConfigLpSolution solve_config_lp(const Instance& inst, const MidrConfig& cfg) {
  int n = inst.num_players, m = inst.num_goods;
  std::vector<HypergraphValuation> proxy;
  proxy.reserve(n);
  for (const auto& v : inst.valuations) proxy.push_back(proxy_valuation(v, cfg.B));

  LinearProgram master;
  for (int i = 0; i < n; ++i) master.add_row(RowSense::le, Rational(1));
  for (int j = 0; j < m; ++j) master.add_row(RowSense::le, Rational(cfg.B));

  std::vector<std::pair<int, std::vector<int>>> generated;
  std::map<std::pair<int, std::vector<int>>, bool> seen;
  auto pricer = [&](const LpSolution& sol) -> std::optional<PricedColumn> {
    if (sol.status != LpStatus::optimal)
      throw std::logic_error("config lp: restricted master must stay feasible");
    std::vector<Rational> prices(sol.duals.begin() + n, sol.duals.begin() + n + m);
    PriceVector q = PriceVector::make(prices);
    int best_player = -1;
    Rational best_violation(0);
    DemandResult best_demand;
    for (int i = 0; i < n; ++i) {
      DemandResult d = demand(proxy[i], q);
      Rational violation = d.surplus - sol.duals[i];
      if (!d.bundle.empty() && violation > best_violation) {
        best_violation = violation;
        best_player = i;
        best_demand = d;
      }
    }
    if (best_player == -1) return std::nullopt;
    auto key = std::make_pair(best_player, best_demand.bundle);
    if (seen[key]) throw std::logic_error("config lp: pricing repeated a column");
    seen[key] = true;
    PricedColumn col;
    col.objective = proxy[best_player].value(best_demand.bundle);
    col.entries.push_back({best_player, Rational(1)});
    for (int j : best_demand.bundle) col.entries.push_back({n + j, Rational(1)});
    col.name = "y_" + std::to_string(best_player);
    generated.push_back(std::move(key));
    return col;
  };

  LpSolution sol = solve_with_pricing(master, pricer);
  ConfigLpSolution out;
  out.objective = sol.objective;
  out.player_duals.assign(sol.duals.begin(), sol.duals.begin() + n);
  out.good_duals.assign(sol.duals.begin() + n, sol.duals.begin() + n + m);
  for (std::size_t c = 0; c < generated.size(); ++c)
    if (sol.primal[c] > 0)
      out.columns.push_back({generated[c].first, generated[c].second, sol.primal[c]});
  return out;
}

// One integral configuration: at most one bundle per player, each good
// claimed by at most B players.
struct IntegralPoint {
  std::vector<std::vector<int>> bundles;  // per player; empty = no bundle
};

struct Decomposition {
  std::vector<Rational> lambda;
  std::vector<IntegralPoint> points;
  Rational alpha_used{0};
};

namespace detail {

// Best integral configuration for additive per-(player, bundle) prizes,
// subject to per-good multiplicity <= B. Exhaustive over each player's
// support bundles; fine at desk scale.
inline Rational best_configuration(const std::vector<std::vector<std::pair<std::vector<int>, Rational>>>& options,
                                   int num_goods, int B,
                                   std::vector<int>& chosen) {
  int n = static_cast<int>(options.size());
  std::vector<int> load(num_goods, 0), pick(n, -1);
  Rational best(0);
  bool have = false;
  std::vector<int> best_pick(n, -1);
  auto rec = [&](auto&& self, int player, Rational acc) -> void {
    if (player == n) {
      if (!have || acc > best) {
        have = true;
        best = acc;
        best_pick = pick;
      }
      return;
    }
    self(self, player + 1, acc);  // player takes nothing
    for (int k = 0; k < static_cast<int>(options[player].size()); ++k) {
      const auto& [bundle, prize] = options[player][k];
      bool fits = true;
      for (int j : bundle)
        if (load[j] + 1 > B) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (int j : bundle) ++load[j];
      pick[player] = k;
      self(self, player + 1, acc + prize);
      pick[player] = -1;
      for (int j : bundle) --load[j];
    }
  };
  rec(rec, 0, Rational(0));
  chosen = best_pick;
  return best;
}

}  // namespace detail

// Writes y*/alpha as a convex combination of integral configurations whose
// bundles come from the support of y*. The feasibility LP over generated
// points is driven by Farkas-certificate pricing; when the configured alpha
// admits no decomposition, alpha is raised once by an integer factor at
// least m^(1/(B+1)) before failing.
inline Decomposition decompose(const Instance& inst, const MidrConfig& cfg,
                               const ConfigLpSolution& y) {
  int n = inst.num_players, m = inst.num_goods;
  std::vector<std::vector<std::vector<int>>> support(n);  // per player: bundles
  std::vector<std::vector<int>> row_of(n);                // per player: row per bundle
  int rows = 0;
  for (const auto& col : y.columns) {
    support[col.player].push_back(col.bundle);
    row_of[col.player].push_back(rows++);
  }

  auto attempt = [&](const Rational& alpha, Decomposition& out) -> bool {
    LinearProgram lp;
    for (const auto& col : y.columns) lp.add_row(RowSense::eq, col.y / alpha);
    int normalization = lp.add_row(RowSense::eq, Rational(1));

    std::vector<IntegralPoint> points;
    auto add_point = [&](IntegralPoint point) {
      std::vector<std::pair<int, Rational>> entries;
      for (int i = 0; i < n; ++i) {
        if (point.bundles[i].empty()) continue;
        for (std::size_t k = 0; k < support[i].size(); ++k)
          if (support[i][k] == point.bundles[i]) {
            entries.push_back({row_of[i][k], Rational(1)});
            break;
          }
      }
      entries.push_back({normalization, Rational(1)});
      lp.add_column(Rational(0), entries, Rational(0), "z" + std::to_string(points.size()));
      points.push_back(std::move(point));
    };

    IntegralPoint idle;
    idle.bundles.assign(n, {});
    add_point(idle);
    for (int i = 0; i < n; ++i)
      for (const auto& bundle : support[i]) {
        IntegralPoint single;
        single.bundles.assign(n, {});
        single.bundles[i] = bundle;
        add_point(single);
      }

    auto pricer = [&](const LpSolution& sol) -> std::optional<PricedColumn> {
      if (sol.status == LpStatus::optimal) return std::nullopt;
      // Farkas certificate: find a configuration with positive certificate
      // value to cut it, or conclude genuine infeasibility.
      std::vector<std::vector<std::pair<std::vector<int>, Rational>>> options(n);
      for (int i = 0; i < n; ++i)
        for (std::size_t k = 0; k < support[i].size(); ++k)
          if (sol.duals[row_of[i][k]] > 0)
            options[i].push_back({support[i][k], sol.duals[row_of[i][k]]});
      std::vector<int> pick;
      Rational best = detail::best_configuration(options, m, cfg.B, pick);
      if (sol.duals[normalization] + best <= 0) return std::nullopt;
      IntegralPoint point;
      point.bundles.assign(n, {});
      for (int i = 0; i < n; ++i)
        if (pick[i] != -1) point.bundles[i] = options[i][pick[i]].first;
      std::vector<std::pair<int, Rational>> entries;
      for (int i = 0; i < n; ++i)
        if (pick[i] != -1)
          for (std::size_t k = 0; k < support[i].size(); ++k)
            if (support[i][k] == point.bundles[i]) {
              entries.push_back({row_of[i][k], Rational(1)});
              break;
            }
      entries.push_back({normalization, Rational(1)});
      PricedColumn col;
      col.objective = Rational(0);
      col.entries = std::move(entries);
      col.name = "z" + std::to_string(points.size());
      points.push_back(std::move(point));
      return col;
    };

    LpSolution sol = solve_with_pricing(lp, pricer);
    if (sol.status != LpStatus::optimal) return false;
    out.lambda.clear();
    out.points.clear();
    for (std::size_t c = 0; c < points.size(); ++c)
      if (sol.primal[c] > 0) {
        out.lambda.push_back(sol.primal[c]);
        out.points.push_back(points[c]);
      }
    out.alpha_used = alpha;
    return true;
  };

  Decomposition out;
  if (attempt(cfg.alpha, out)) return out;
  BigInt factor = 2;
  while (rational_pow(Rational(factor), cfg.B + 1) < Rational(m)) ++factor;
  if (attempt(cfg.alpha * Rational(factor), out)) return out;
  throw std::runtime_error("decompose: no convex decomposition found after raising alpha");
}

// Per-good conflict resolution: the claimants of good j (players whose
// bundle in z contains j, ascending) receive it with probability 1/B each,
// via one uniform draw d in {0,...,B-1} per good from its own stream.
inline Allocation resolve_conflicts(const Instance& inst, const IntegralPoint& z,
                                    const MidrConfig& cfg, std::uint64_t seed) {
  int n = inst.num_players, m = inst.num_goods;
  if (static_cast<int>(z.bundles.size()) != n)
    throw std::invalid_argument("resolve_conflicts: wrong number of bundles");
  std::vector<std::vector<int>> claimants(m);
  for (int i = 0; i < n; ++i)
    for (int j : z.bundles[i]) {
      if (j < 0 || j >= m) throw std::out_of_range("resolve_conflicts: good out of range");
      claimants[j].push_back(i);
    }
  Allocation alloc;
  alloc.owner.assign(m, Allocation::kUnallocated);
  for (int j = 0; j < m; ++j) {
    if (static_cast<int>(claimants[j].size()) > cfg.B)
      throw std::invalid_argument("resolve_conflicts: good claimed more than B times");
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(j));
    int d = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg.B)));
    if (d < static_cast<int>(claimants[j].size())) alloc.owner[j] = claimants[j][d];
  }
  return alloc;
}

struct MidrResult {
  MidrConfig config;  // alpha reflects any raise performed by decompose
  ConfigLpSolution lp;
  Decomposition decomposition;
  int sampled_point = 0;
  Allocation allocation;
  std::vector<Rational> payments;
  Rational expected_proxy_welfare{0};  // f(y*) / alpha
  std::uint64_t seed = 0;
};

namespace detail {

inline constexpr std::uint64_t kLotteryStream = 0x8000000000000001ull;

}  // namespace detail

// Per-player proxy value of y*: f_i(y*) = sum_S y_iS v'_i(S).
inline Rational config_player_value(const Instance& inst, const MidrConfig& cfg,
                                    const ConfigLpSolution& y, int player) {
  HypergraphValuation proxy = proxy_valuation(inst.valuations[player], cfg.B);
  Rational total(0);
  for (const auto& col : y.columns)
    if (col.player == player) total += col.y * proxy.value(col.bundle);
  return total;
}

inline MidrResult run_midr(const Instance& inst, MidrConfig cfg, std::uint64_t seed) {
  cfg.validate(inst.num_goods);
  MidrResult res;
  res.seed = seed;
  res.lp = solve_config_lp(inst, cfg);
  res.decomposition = decompose(inst, cfg, res.lp);
  cfg.alpha = res.decomposition.alpha_used;
  res.config = cfg;
  res.expected_proxy_welfare = res.lp.objective / cfg.alpha;

  // Lottery over decomposition points with exact cumulative weights.
  Rng lottery = derived_rng(seed, detail::kLotteryStream);
  Rational t(BigInt(lottery.next_u64()), BigInt(1) << 64);
  Rational cumulative(0);
  res.sampled_point = static_cast<int>(res.decomposition.points.size()) - 1;
  for (std::size_t l = 0; l < res.decomposition.points.size(); ++l) {
    cumulative += res.decomposition.lambda[l];
    if (t < cumulative) {
      res.sampled_point = static_cast<int>(l);
      break;
    }
  }
  res.allocation =
      resolve_conflicts(inst, res.decomposition.points[res.sampled_point], cfg, seed);

  // payment_i = [(optimum with i zeroed) - (everyone else's share of f(y*))]
  // divided by alpha; nonnegative because y* stays feasible when i is zeroed.
  res.payments.resize(inst.num_players);
  for (int i = 0; i < inst.num_players; ++i) {
    ConfigLpSolution without = solve_config_lp(zero_player(inst, i), cfg);
    Rational others = res.lp.objective - config_player_value(inst, cfg, res.lp, i);
    res.payments[i] = (without.objective - others) / cfg.alpha;
    if (res.payments[i] < 0) throw std::logic_error("run_midr: negative payment");
  }
  return res;
}

// Exact expected value of the mechanism's random allocation to `player`
// under an arbitrary true valuation: goods resolve independently with
// marginal 1/B, so conditioned on point z the expectation is the proxy of
// the true valuation at z's bundle.
inline Rational midr_expected_value(const MidrResult& res, int player,
                                    const HypergraphValuation& true_valuation) {
  HypergraphValuation proxy = proxy_valuation(true_valuation, res.config.B);
  Rational total(0);
  for (std::size_t l = 0; l < res.decomposition.points.size(); ++l)
    total += res.decomposition.lambda[l] * proxy.value(res.decomposition.points[l].bundles[player]);
  return total;
}

// f(z) for an integral configuration: sum of proxy values of the bundles.
inline Rational integral_point_proxy_welfare(const Instance& inst, const MidrConfig& cfg,
                                             const IntegralPoint& z) {
  Rational total(0);
  for (int i = 0; i < inst.num_players; ++i)
    total += proxy_valuation(inst.valuations[i], cfg.B).value(z.bundles[i]);
  return total;
}

}  // namespace hgca
