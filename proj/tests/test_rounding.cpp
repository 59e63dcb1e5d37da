#include <catch2/catch_amalgamated.hpp>

#include "hgca/hgca.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hgca;

TEST_CASE("compact relaxation upper-bounds the integral optimum") {
  auto solo = generate_random_hypergraph(4, 1, 2, 4, 7, 5);
  auto lone = solve_compact_lp(solo);
  CHECK(lone.objective == solo.valuations[0].total_value());

  auto star = generate_star(4);
  auto frac = solve_compact_lp(star);
  CHECK(frac.objective >= Rational(3));

  for (int t = 0; t < 12; ++t) {
    auto inst = generate_random_hypergraph(4 + t % 2, 2 + t % 2, 3, 5, 9, mix_seed(70, t));
    auto sol = solve_compact_lp(inst);
    auto opt = solve_bruteforce(inst);
    REQUIRE(sol.objective >= opt.welfare);
    // per-good supply: assignment variables sum to one
    for (int j = 0; j < inst.num_goods; ++j) {
      Rational col(0);
      for (int i = 0; i < inst.num_players; ++i) col += sol.x[i][j];
      REQUIRE(col == Rational(1));
    }
    // every positively weighted edge variable meets its binding minimum
    for (int i = 0; i < inst.num_players; ++i)
      for (std::size_t e = 0; e < inst.valuations[i].edges.size(); ++e) {
        Rational lowest(2);
        for (int j : inst.valuations[i].edges[e].goods)
          if (sol.x[i][j] < lowest) lowest = sol.x[i][j];
        REQUIRE(sol.z[i][e] == lowest);
      }
  }
}

TEST_CASE("rounding returns an integral optimum unchanged") {
  auto zeros = std::vector<Rational>(4, Rational(0));
  auto s0 = HypergraphValuation::make(4, zeros, {{{0, 1}, Rational(5)}});
  auto s1 = HypergraphValuation::make(4, zeros, {{{2, 3}, Rational(4)}});
  auto inst = Instance::make(2, 4, {s0, s1});
  auto report = solve_and_round(inst, 40, 99);
  CHECK(report.lp_value == Rational(9));
  CHECK(report.best_welfare == Rational(9));
  CHECK(report.mean_welfare == Rational(9));  // every draw reproduces the optimum
  CHECK(report.welfare_stddev == 0.0);
  CHECK(report.best_allocation.owner == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("sampler matches the fractional per-good marginals") {
  auto v = HypergraphValuation::make(2, {Rational(1), Rational(1)}, {});
  auto inst = Instance::make(2, 2, {v, v});
  CompactLpSolution sol;
  sol.x = {{Rational(1, 4), Rational(1, 2)}, {Rational(3, 4), Rational(1, 2)}};
  sol.z = {{}, {}};
  sol.objective = Rational(2);
  RoundingSampler sampler(inst, sol);

  const int trials = 20000;
  int hits[2][2] = {};
  Rng rng(12345);
  for (int t = 0; t < trials; ++t) {
    auto alloc = sampler.sample(rng);
    for (int j = 0; j < 2; ++j) {
      REQUIRE(alloc.owner[j] != Allocation::kUnallocated);
      ++hits[alloc.owner[j]][j];
    }
  }
  auto close = [&](int i, int j, double p) {
    double freq = static_cast<double>(hits[i][j]) / trials;
    double se = std::sqrt(p * (1 - p) / trials);
    return std::abs(freq - p) <= 4 * se;
  };
  CHECK(close(0, 0, 0.25));
  CHECK(close(1, 0, 0.75));
  CHECK(close(0, 1, 0.5));
  CHECK(close(1, 1, 0.5));
}

TEST_CASE("rounding reports are deterministic in the seed") {
  auto inst = generate_random_hypergraph(5, 2, 3, 6, 9, 21);
  auto a = solve_and_round(inst, 200, 4242);
  auto b = solve_and_round(inst, 200, 4242);
  CHECK(a.mean_welfare == b.mean_welfare);
  CHECK(a.best_welfare == b.best_welfare);
  CHECK(a.best_allocation.owner == b.best_allocation.owner);
  CHECK(a.ratio_certificate == a.lp_value / max_rank(inst));
  CHECK(a.trials == 200);
  CHECK_THROWS_AS(solve_and_round(inst, 0, 1), std::invalid_argument);
}

TEST_CASE("mean rounded welfare clears the relaxation floor") {
  for (int t = 0; t < 3; ++t) {
    auto inst = generate_random_hypergraph(5, 2, 3, 6, 9, mix_seed(80, t));
    int trials = 3000;
    auto report = solve_and_round(inst, trials, mix_seed(81, t));
    double mean = to_double(report.mean_welfare);
    double floor = to_double(report.ratio_certificate);
    double slack = 4.0 * report.welfare_stddev / std::sqrt(static_cast<double>(trials));
    REQUIRE(mean >= floor - slack);
  }
}
