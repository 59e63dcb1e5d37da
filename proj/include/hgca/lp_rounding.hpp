#pragma once

// Fractional relaxation of welfare maximization and its threshold rounding.
//
// Variables: x[i][j] = fraction of good j given to player i, z[i][e] =
// fractional coverage of edge e by player i. Constraints: each good fully
// assigned, z[i][e] <= x[i][j] for every good j in e. The rounding draws a
// (player, threshold) pair per round and hands every still-unassigned good
// j with x[i][j] >= t to the drawn player; good j lands at player i with
// probability exactly x[i][j], and player i keeps a whole edge e with
// probability at least z[i][e] / |e|. Expected welfare is therefore at
// least (LP optimum) / r where r is the largest edge size.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgca/lp.hpp"
#include "hgca/rational.hpp"
#include "hgca/rng.hpp"
#include "hgca/simplex.hpp"
#include "hgca/valuation.hpp"

namespace hgca {

struct CompactLp {
  LinearProgram lp;
  std::vector<std::vector<int>> x_index;  // [player][good]
  std::vector<std::vector<int>> z_index;  // [player][edge]
  std::vector<int> supply_row;            // [good]
};

inline CompactLp build_compact_lp(const Instance& inst) {
  CompactLp out;
  int n = inst.num_players, m = inst.num_goods;
  out.x_index.assign(n, std::vector<int>(m, -1));
  out.z_index.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& v = inst.valuations[i];
    for (int j = 0; j < m; ++j)
      out.x_index[i][j] = out.lp.add_variable(
          v.vertex_weights[j], Rational(0),
          "x_" + std::to_string(i) + "_" + std::to_string(j));
    out.z_index[i].resize(v.edges.size());
    for (std::size_t e = 0; e < v.edges.size(); ++e)
      out.z_index[i][e] = out.lp.add_variable(
          v.edges[e].weight, Rational(0),
          "z_" + std::to_string(i) + "_" + std::to_string(e));
  }
  out.supply_row.resize(m);
  for (int j = 0; j < m; ++j) {
    int row = out.lp.add_row(RowSense::eq, Rational(1));
    for (int i = 0; i < n; ++i) out.lp.add_term(row, out.x_index[i][j], Rational(1));
    out.supply_row[j] = row;
  }
  for (int i = 0; i < n; ++i) {
    const auto& v = inst.valuations[i];
    for (std::size_t e = 0; e < v.edges.size(); ++e)
      for (int j : v.edges[e].goods) {
        int row = out.lp.add_row(RowSense::le, Rational(0));
        out.lp.add_term(row, out.z_index[i][e], Rational(1));
        out.lp.add_term(row, out.x_index[i][j], Rational(-1));
      }
  }
  return out;
}

struct CompactLpSolution {
  std::vector<std::vector<Rational>> x;  // [player][good]
  std::vector<std::vector<Rational>> z;  // [player][edge]
  Rational objective;
};

inline CompactLpSolution solve_compact_lp(const Instance& inst, const CompactLp& compact) {
  LinearProgram lp = compact.lp;
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal)
    throw std::logic_error("compact relaxation must be feasible and bounded");
  CompactLpSolution out;
  int n = inst.num_players, m = inst.num_goods;
  out.x.assign(n, std::vector<Rational>(m));
  out.z.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) out.x[i][j] = sol.primal[compact.x_index[i][j]];
    out.z[i].resize(compact.z_index[i].size());
    for (std::size_t e = 0; e < compact.z_index[i].size(); ++e)
      out.z[i][e] = sol.primal[compact.z_index[i][e]];
  }
  out.objective = sol.objective;
  return out;
}

inline CompactLpSolution solve_compact_lp(const Instance& inst) {
  return solve_compact_lp(inst, build_compact_lp(inst));
}

// Largest edge size across all players (1 when no player has edges).
inline int max_rank(const Instance& inst) {
  int r = 1;
  for (const auto& v : inst.valuations) r = std::max(r, v.rank);
  return r;
}

// Precomputes a double view of x with each good's column rescaled to sum to
// one, so the sampling loop terminates and per-good marginals match x.
class RoundingSampler {
 public:
  RoundingSampler(const Instance& inst, const CompactLpSolution& sol)
      : num_players_(inst.num_players), num_goods_(inst.num_goods) {
    xd_.assign(num_players_, std::vector<double>(num_goods_, 0.0));
    for (int j = 0; j < num_goods_; ++j) {
      double colsum = 0.0;
      for (int i = 0; i < num_players_; ++i) {
        xd_[i][j] = to_double(sol.x[i][j]);
        colsum += xd_[i][j];
      }
      if (!(colsum > 0.0))
        throw std::logic_error("rounding sampler: good has no fractional owner");
      for (int i = 0; i < num_players_; ++i) xd_[i][j] /= colsum;
    }
  }

  Allocation sample(Rng& rng) const {
    Allocation alloc;
    alloc.owner.assign(num_goods_, Allocation::kUnallocated);
    int left = num_goods_;
    std::uint64_t rounds = 0;
    while (left > 0) {
      if (++rounds > 100000000ull)
        throw std::runtime_error("rounding sampler: assignment loop did not finish");
      int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(num_players_)));
      double t = 1.0 - rng.next_unit();  // uniform on (0, 1]
      for (int j = 0; j < num_goods_; ++j)
        if (alloc.owner[j] == Allocation::kUnallocated && xd_[i][j] >= t) {
          alloc.owner[j] = i;
          --left;
        }
    }
    return alloc;
  }

 private:
  int num_players_;
  int num_goods_;
  std::vector<std::vector<double>> xd_;
};

struct RoundingReport {
  Rational lp_value;
  Allocation best_allocation;
  Rational best_welfare;
  Rational mean_welfare;     // exact mean over all trials
  double welfare_stddev;
  Rational ratio_certificate;  // lp_value / max rank: expected-welfare floor
  int trials = 0;
  std::uint64_t seed = 0;
};

inline RoundingReport solve_and_round(const Instance& inst, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("solve_and_round: trials must be positive");
  CompactLpSolution sol = solve_compact_lp(inst);
  RoundingSampler sampler(inst, sol);
  Rng rng = derived_rng(seed, 0x726f756e64ull);
  RoundingReport report;
  report.lp_value = sol.objective;
  report.ratio_certificate = sol.objective / Rational(max_rank(inst));
  report.trials = trials;
  report.seed = seed;
  Rational sum(0), sumsq(0);
  for (int t = 0; t < trials; ++t) {
    Allocation alloc = sampler.sample(rng);
    Rational w = welfare(inst, alloc);
    sum += w;
    sumsq += w * w;
    if (t == 0 || w > report.best_welfare) {
      report.best_welfare = w;
      report.best_allocation = alloc;
    }
  }
  report.mean_welfare = sum / Rational(trials);
  Rational var = sumsq / Rational(trials) - report.mean_welfare * report.mean_welfare;
  report.welfare_stddev = var > Rational(0) ? std::sqrt(to_double(var)) : 0.0;
  return report;
}

}  // namespace hgca
