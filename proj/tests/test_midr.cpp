#include <catch2/catch_amalgamated.hpp>

#include "hgca/hgca.hpp"
#include "test_support.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

using namespace hgca;

TEST_CASE("proxy scales weights by per-good retention") {
  auto v = HypergraphValuation::make(3, {Rational(4), Rational(2), Rational(0)},
                                     {{{0, 1}, Rational(8)}});
  auto p = proxy_valuation(v, 2);
  CHECK(p.vertex_weights[0] == Rational(2));
  CHECK(p.vertex_weights[1] == Rational(1));
  CHECK(p.edges[0].weight == Rational(2));
  CHECK(p.value({0, 1}) == Rational(5));

  auto same = proxy_valuation(v, 1);
  CHECK(same.vertex_weights == v.vertex_weights);
  CHECK(same.edges[0].weight == v.edges[0].weight);
  CHECK_THROWS_AS(proxy_valuation(v, 0), std::invalid_argument);
}

TEST_CASE("single-player configuration program takes the full bundle") {
  auto v = HypergraphValuation::make(3, {Rational(1), Rational(2), Rational(0)},
                                     {{{0, 1}, Rational(4)}});
  auto inst = Instance::make(1, 3, {v});
  auto cfg = MidrConfig::defaults_for(3);
  auto sol = solve_config_lp(inst, cfg);
  CHECK(sol.objective == proxy_valuation(v, cfg.B).total_value());
  REQUIRE(sol.columns.size() == 1);
  CHECK(sol.columns[0].player == 0);
  CHECK(sol.columns[0].bundle == std::vector<int>{0, 1, 2});
  CHECK(sol.columns[0].y == Rational(1));
  CHECK(sol.player_duals.size() == 1);
  CHECK(sol.good_duals.size() == 3);
}

TEST_CASE("generated columns reach the enumerated optimum") {
  for (int t = 0; t < 12; ++t) {
    auto inst = generate_random_hypergraph(3 + t % 3, 2 + t % 2, 2 + t % 2, 4, 7,
                                           mix_seed(140, t));
    auto cfg = MidrConfig::defaults_for(inst.num_goods);
    auto sol = solve_config_lp(inst, cfg);
    REQUIRE(sol.objective == test_support::enumerate_config_lp(inst, cfg));
    Rational per_player(0);
    for (int i = 0; i < inst.num_players; ++i)
      per_player += config_player_value(inst, cfg, sol, i);
    REQUIRE(per_player == sol.objective);
  }
}

TEST_CASE("convex decomposition reproduces the scaled fractional point") {
  for (int t = 0; t < 8; ++t) {
    auto inst = generate_random_hypergraph(3 + t % 2, 2, 2, 4, 7, mix_seed(150, t));
    auto cfg = MidrConfig::defaults_for(inst.num_goods);
    auto y = solve_config_lp(inst, cfg);
    auto dec = decompose(inst, cfg, y);
    Rational total(0);
    for (const auto& l : dec.lambda) {
      REQUIRE(l > Rational(0));
      total += l;
    }
    REQUIRE(total == Rational(1));
    for (const auto& col : y.columns) {
      Rational mass(0);
      for (std::size_t l = 0; l < dec.points.size(); ++l)
        if (dec.points[l].bundles[col.player] == col.bundle) mass += dec.lambda[l];
      REQUIRE(mass == col.y / dec.alpha_used);
    }
    for (const auto& point : dec.points) {
      std::vector<int> load(inst.num_goods, 0);
      for (const auto& bundle : point.bundles)
        for (int j : bundle) ++load[j];
      for (int j = 0; j < inst.num_goods; ++j) REQUIRE(load[j] <= cfg.B);
    }
  }
}

TEST_CASE("integral optimum decomposes into itself at scale one") {
  auto v = HypergraphValuation::make(3, {Rational(1), Rational(2), Rational(0)},
                                     {{{0, 1}, Rational(4)}});
  auto inst = Instance::make(1, 3, {v});
  MidrConfig cfg = MidrConfig::defaults_for(3);
  cfg.alpha = Rational(1);
  auto y = solve_config_lp(inst, cfg);
  auto dec = decompose(inst, cfg, y);
  CHECK(dec.alpha_used == Rational(1));
  REQUIRE(dec.lambda == std::vector<Rational>{Rational(1)});
  CHECK(dec.points[0].bundles[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("conflict resolution hands each claimant a one-in-B chance") {
  auto unit = HypergraphValuation::make(1, {Rational(1)}, {});
  auto inst = Instance::make(2, 1, {unit, unit});
  MidrConfig cfg;
  cfg.B = 2;

  IntegralPoint both;
  both.bundles = {{0}, {0}};
  int counts[2] = {};
  const int trials = 4000;
  for (int s = 0; s < trials; ++s) {
    auto alloc = resolve_conflicts(inst, both, cfg, s);
    REQUIRE(alloc.owner[0] != Allocation::kUnallocated);  // claimants fill all of B
    ++counts[alloc.owner[0]];
    auto again = resolve_conflicts(inst, both, cfg, s);
    REQUIRE(again.owner == alloc.owner);
  }
  // 4 standard errors around B=2 marginals
  CHECK(std::abs(counts[0] - trials / 2) <= 127);

  IntegralPoint lone;
  lone.bundles = {{0}, {}};
  int hits = 0;
  for (int s = 0; s < trials; ++s)
    if (resolve_conflicts(inst, lone, cfg, s).owner[0] == 0) ++hits;
  CHECK(std::abs(hits - trials / 2) <= 127);

  MidrConfig wide;
  wide.B = 3;
  int three[3] = {};  // owner 0, owner 1, unallocated
  for (int s = 0; s < trials; ++s) {
    int who = resolve_conflicts(inst, both, wide, s).owner[0];
    ++three[who == Allocation::kUnallocated ? 2 : who];
  }
  for (int k = 0; k < 3; ++k) CHECK(std::abs(three[k] - trials / 3) <= 120);

  auto trio = Instance::make(3, 1, {unit, unit, unit});
  IntegralPoint crowded;
  crowded.bundles = {{0}, {0}, {0}};
  CHECK_THROWS_AS(resolve_conflicts(trio, crowded, cfg, 1), std::invalid_argument);
  CHECK_THROWS_AS(resolve_conflicts(inst, crowded, cfg, 1), std::invalid_argument);
  IntegralPoint stray;
  stray.bundles = {{5}, {}};
  CHECK_THROWS_AS(resolve_conflicts(inst, stray, cfg, 1), std::out_of_range);
}

TEST_CASE("auction run satisfies its welfare and rationality identities") {
  for (int t = 0; t < 8; ++t) {
    auto inst = generate_random_hypergraph(3 + t % 2, 2, 2, 4, 7, mix_seed(160, t));
    auto cfg = MidrConfig::defaults_for(inst.num_goods);
    auto res = run_midr(inst, cfg, mix_seed(161, t));
    REQUIRE(res.expected_proxy_welfare == res.lp.objective / res.decomposition.alpha_used);
    Rational opt = solve_bruteforce(inst).welfare;
    Rational floor = opt / (res.decomposition.alpha_used *
                            rational_pow(Rational(res.config.B), max_rank(inst)));
    REQUIRE(res.expected_proxy_welfare >= floor);
    REQUIRE(static_cast<int>(res.payments.size()) == inst.num_players);
    const auto& point = res.decomposition.points[res.sampled_point];
    for (int j = 0; j < inst.num_goods; ++j) {
      int who = res.allocation.owner[j];
      if (who == Allocation::kUnallocated) continue;
      bool claimed = false;
      for (int g : point.bundles[who]) claimed = claimed || g == j;
      REQUIRE(claimed);
    }
    for (int i = 0; i < inst.num_players; ++i) {
      REQUIRE(res.payments[i] >= Rational(0));
      // participating truthfully never costs more than the expected value
      REQUIRE(midr_expected_value(res, i, inst.valuations[i]) >= res.payments[i]);
    }
    auto rerun = run_midr(inst, cfg, mix_seed(161, t));
    REQUIRE(rerun.allocation.owner == res.allocation.owner);
    REQUIRE(rerun.payments == res.payments);
    REQUIRE(rerun.sampled_point == res.sampled_point);
  }
}

TEST_CASE("no profitable misreport against the lottery auction") {
  auto misreports = standard_misreports(3, 777);
  for (int t = 0; t < 2; ++t) {
    auto inst = generate_random_hypergraph(3, 2, 2, 3, 5, mix_seed(170, t));
    auto cfg = MidrConfig::defaults_for(inst.num_goods);
    auto mech = make_midr_mechanism(cfg, mix_seed(171, t));
    REQUIRE_FALSE(deviation_search(mech, inst, misreports, Rational(1, 1000000)).has_value());
  }
}
