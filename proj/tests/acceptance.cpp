// Acceptance gate: one line per criterion, exit 0 only if every selected
// criterion passes. Run with --criterion N to restrict to one criterion.

#include "hgca/hgca.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hgca;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& out, bool ok, const std::string& what) {
  if (ok) return;
  out.pass = false;
  if (!out.detail.empty()) out.detail += "; ";
  out.detail += what;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void enforce_budget(Outcome& out, Clock::time_point start, double limit_seconds) {
  double elapsed = seconds_since(start);
  require(out, elapsed <= limit_seconds,
          "exceeded time budget of " + std::to_string(limit_seconds) + "s");
  std::ostringstream extra;
  extra.setf(std::ios::fixed);
  extra.precision(1);
  extra << " [" << elapsed << "s]";
  out.detail += extra.str();
}

// fast demand oracle vs exhaustive search, 500 instances, m <= 12, r <= 3
Outcome criterion1() {
  auto start = Clock::now();
  Outcome out;
  int checks = 0;
  for (int s = 0; s < 500; ++s) {
    int m = 2 + s % 11;
    int r = std::min(m, 1 + s % 3);
    auto inst = generate_random_hypergraph(m, 1, r, m, 10, mix_seed(9001, s));
    const auto& v = inst.valuations[0];
    for (int round = 0; round < 2; ++round) {
      Rng rng = derived_rng(mix_seed(9002, s), static_cast<std::uint64_t>(round));
      std::vector<Rational> prices(m);
      for (auto& p : prices) p = Rational(rng.next_below(21), 2);
      auto pv = PriceVector::make(prices);
      auto fast = demand(v, pv);
      auto slow = demand_bruteforce(v, pv);
      ++checks;
      require(out, fast.bundle == slow.bundle && fast.surplus == slow.surplus,
              "oracle mismatch on instance " + std::to_string(s));
      if (!out.pass) return out;
    }
  }
  out.detail = std::to_string(checks) + " demand queries agree exactly";
  enforce_budget(out, start, 60.0);
  return out;
}

// tree decomposition solver vs brute force, 200 rank-2 instances, width <= 3
Outcome criterion2() {
  auto start = Clock::now();
  Outcome out;
  int processed = 0, skipped = 0, s = 0;
  while (processed < 200) {
    Instance inst = s % 2 == 0
                        ? generate_grid(1 + s % 2, 2 + s % 3, 2 + s % 2, mix_seed(9010, s))
                        : test_support::random_bounded_degree_instance(4 + s % 5, 2 + s % 2, 3,
                                                                       8, mix_seed(9011, s));
    ++s;
    auto td = build_tree_decomposition(inst.num_goods, instance_graph_edges(inst));
    if (td.width() > 3) {
      ++skipped;
      continue;
    }
    auto exact = solve_bruteforce(inst);
    auto dp = solve_treewidth(inst, td);
    require(out, exact.welfare == dp.welfare && exact.allocation.owner == dp.allocation.owner,
            "solver disagreement on draw " + std::to_string(s - 1));
    if (!out.pass) return out;
    ++processed;
  }
  out.detail = "200 instances agree exactly (" + std::to_string(skipped) + " wide draws skipped)";
  enforce_budget(out, start, 120.0);
  return out;
}

std::vector<Instance> fixed_rounding_instances() {
  std::vector<Instance> set;
  for (int s = 0; s < 20; ++s)
    set.push_back(
        generate_random_hypergraph(3 + s % 4, 2 + s % 2, 2 + s % 2, 3 + s % 4, 10,
                                   mix_seed(9100, s)));
  return set;
}

// sampled marginals reach the fractional solution, 20 instances x 1e5 draws
Outcome criterion3() {
  auto start = Clock::now();
  Outcome out;
  const int trials = 100000;
  auto set = fixed_rounding_instances();
  for (std::size_t s = 0; s < set.size(); ++s) {
    const Instance& inst = set[s];
    auto sol = solve_compact_lp(inst);
    RoundingSampler sampler(inst, sol);
    int n = inst.num_players, m = inst.num_goods;
    std::vector<std::vector<int>> good_hits(n, std::vector<int>(m, 0));
    std::vector<std::vector<int>> edge_hits(n);
    std::vector<std::vector<std::uint64_t>> edge_masks(n);
    for (int i = 0; i < n; ++i) {
      edge_hits[i].assign(inst.valuations[i].edges.size(), 0);
      for (const auto& e : inst.valuations[i].edges) {
        std::uint64_t mask = 0;
        for (int j : e.goods) mask |= 1ull << j;
        edge_masks[i].push_back(mask);
      }
    }
    Rng rng = derived_rng(mix_seed(9200, static_cast<std::uint64_t>(s)), 0);
    for (int t = 0; t < trials; ++t) {
      Allocation alloc = sampler.sample(rng);
      std::vector<std::uint64_t> owned(n, 0);
      for (int j = 0; j < m; ++j)
        if (alloc.owner[j] >= 0) {
          ++good_hits[alloc.owner[j]][j];
          owned[alloc.owner[j]] |= 1ull << j;
        }
      for (int i = 0; i < n; ++i)
        for (std::size_t e = 0; e < edge_masks[i].size(); ++e)
          if ((owned[i] & edge_masks[i][e]) == edge_masks[i][e]) ++edge_hits[i][e];
    }
    for (int i = 0; i < n && out.pass; ++i) {
      for (int j = 0; j < m; ++j) {
        double p = to_double(sol.x[i][j]);
        double freq = static_cast<double>(good_hits[i][j]) / trials;
        double se = std::sqrt(std::max(p * (1 - p), 0.0) / trials);
        require(out, freq >= p - 3 * se,
                "good marginal below target on instance " + std::to_string(s));
      }
      for (std::size_t e = 0; e < edge_masks[i].size(); ++e) {
        double p = to_double(sol.z[i][e] / Rational(inst.valuations[i].edges[e].goods.size()));
        double freq = static_cast<double>(edge_hits[i][e]) / trials;
        double se = std::sqrt(std::max(p * (1 - p), 0.0) / trials);
        require(out, freq >= p - 3 * se,
                "edge marginal below target on instance " + std::to_string(s));
      }
    }
    if (!out.pass) return out;
  }
  out.detail = "20 instances x 100000 draws meet every marginal floor";
  enforce_budget(out, start, 300.0);
  return out;
}

// mean rounded welfare vs lp/r and optimum/r floors, 1e4 trials
Outcome criterion4() {
  Outcome out;
  const int trials = 10000;
  auto set = fixed_rounding_instances();
  for (std::size_t s = 0; s < set.size(); ++s) {
    const Instance& inst = set[s];
    auto report = solve_and_round(inst, trials, mix_seed(9300, static_cast<std::uint64_t>(s)));
    Rational opt = solve_bruteforce(inst).welfare;
    int r = max_rank(inst);
    double slack = 3.0 * report.welfare_stddev / std::sqrt(static_cast<double>(trials));
    double mean = to_double(report.mean_welfare);
    require(out, mean >= to_double(report.lp_value / r) - slack,
            "mean below lp floor on instance " + std::to_string(s));
    require(out, mean >= to_double(opt / r) - slack,
            "mean below optimum floor on instance " + std::to_string(s));
    if (!out.pass) return out;
  }
  out.detail = "20 instances x 10000 trials clear both welfare floors";
  return out;
}

// layered deletion on 100 two-player grids: exact (1 - eps) bound plus the
// charging identity sum of part losses <= 2 * optimum
Outcome criterion5() {
  auto start = Clock::now();
  Outcome out;
  const Rational eps(1, 2);
  for (int s = 0; s < 100; ++s) {
    auto inst = generate_grid(1 + s % 4, 2 + s % 3, 2, mix_seed(9400, s));
    auto opt = solve_bruteforce(inst);
    auto mech = baker_allocate(inst, eps);
    Rational realized = welfare(inst, mech.allocation);
    require(out, realized >= (Rational(1) - eps) * opt.welfare,
            "welfare below (1-eps) floor on grid " + std::to_string(s));

    auto plan = make_baker_plan(inst, eps);
    std::vector<Rational> alpha(plan.parts, Rational(0));
    for (int j = 0; j < inst.num_goods; ++j)
      alpha[plan.layer_class[j]] +=
          inst.valuations[opt.allocation.owner[j]].vertex_weights[j];
    for (int i = 0; i < inst.num_players; ++i)
      for (const auto& e : inst.valuations[i].edges) {
        if (opt.allocation.owner[e.goods[0]] != i || opt.allocation.owner[e.goods[1]] != i)
          continue;
        int ca = plan.layer_class[e.goods[0]], cb = plan.layer_class[e.goods[1]];
        alpha[ca] += e.weight;
        if (cb != ca) alpha[cb] += e.weight;
      }
    Rational total(0);
    for (const auto& a : alpha) total += a;
    require(out, total <= Rational(2) * opt.welfare,
            "charging identity fails on grid " + std::to_string(s));
    if (!out.pass) return out;
  }
  out.detail = "100 grids meet the exact bound and the charging identity";
  enforce_budget(out, start, 300.0);
  return out;
}

// no profitable misreport at zero tolerance; a broken pay-your-bid rule is
// flagged by the same search
Outcome criterion6() {
  Outcome out;
  auto misreports = standard_misreports(40, 9500);
  auto vcg = make_vcg_bruteforce_mechanism();
  for (int s = 0; s < 25; ++s) {
    auto inst = generate_random_hypergraph(3 + s % 2, 2 + s % 2, 2, 4, 8, mix_seed(9501, s));
    auto dev = deviation_search(vcg, inst, misreports, Rational(0));
    require(out, !dev.has_value(), "deviation against vcg on instance " + std::to_string(s));
    if (!out.pass) return out;
  }
  auto baker = make_baker_mechanism(Rational(1, 2));
  for (int s = 0; s < 25; ++s) {
    auto inst = generate_grid(1 + s % 2, 2 + s % 2, 2, mix_seed(9502, s));
    auto dev = deviation_search(baker, inst, misreports, Rational(0));
    require(out, !dev.has_value(), "deviation against baker on instance " + std::to_string(s));
    if (!out.pass) return out;
  }

  auto zeros = std::vector<Rational>(2, Rational(0));
  auto wants10 = HypergraphValuation::make(2, zeros, {{{0, 1}, Rational(10)}});
  auto wants3 = HypergraphValuation::make(2, zeros, {{{0, 1}, Rational(3)}});
  auto contest = Instance::make(2, 2, {wants10, wants3});
  auto flagged =
      deviation_search(test_support::make_first_price_mechanism(), contest, misreports,
                       Rational(0));
  require(out, flagged.has_value(), "broken pay-your-bid mechanism was not flagged");
  out.detail = "50 instances x >=43 misreports per player stay truthful; broken rule flagged";
  return out;
}

// lottery auction: decomposition identities, welfare floor, conditional
// welfare monte carlo, and misreport search
Outcome criterion7() {
  Outcome out;
  std::vector<Instance> set;
  for (int s = 0; s < 50; ++s)
    set.push_back(generate_random_hypergraph(3 + s % 3, 2 + s % 2, 2, 4, 8, mix_seed(9600, s)));

  for (std::size_t s = 0; s < set.size(); ++s) {
    const Instance& inst = set[s];
    auto cfg = MidrConfig::defaults_for(inst.num_goods);
    auto res = run_midr(inst, cfg, mix_seed(9601, static_cast<std::uint64_t>(s)));

    Rational lambda_total(0);
    for (const auto& l : res.decomposition.lambda) lambda_total += l;
    require(out, std::abs(to_double(lambda_total - Rational(1))) <= 1e-12,
            "lottery weights do not sum to one on instance " + std::to_string(s));
    for (const auto& col : res.lp.columns) {
      Rational mass(0);
      for (std::size_t l = 0; l < res.decomposition.points.size(); ++l)
        if (res.decomposition.points[l].bundles[col.player] == col.bundle)
          mass += res.decomposition.lambda[l];
      require(out,
              std::abs(to_double(mass - col.y / res.decomposition.alpha_used)) <= 1e-9,
              "decomposition misses a column mass on instance " + std::to_string(s));
    }

    Rational opt = solve_bruteforce(inst).welfare;
    Rational denom = res.decomposition.alpha_used *
                     rational_pow(Rational(res.config.B), max_rank(inst));
    require(out, res.expected_proxy_welfare >= opt / denom,
            "expected welfare below the guarantee on instance " + std::to_string(s));
    if (!out.pass) return out;

    if (s < 5) {
      const auto& point = res.decomposition.points[res.sampled_point];
      Rational target = integral_point_proxy_welfare(inst, res.config, point);
      const int draws = 100000;
      double sum = 0, sumsq = 0;
      for (int d = 0; d < draws; ++d) {
        auto alloc = resolve_conflicts(inst, point, res.config,
                                       mix_seed(9602, static_cast<std::uint64_t>(d)));
        double w = to_double(welfare(inst, alloc));
        sum += w;
        sumsq += w * w;
      }
      double mean = sum / draws;
      double var = std::max(sumsq / draws - mean * mean, 0.0);
      double se = std::sqrt(var / draws);
      require(out, std::abs(mean - to_double(target)) <= 3 * se + 1e-9,
              "conditional welfare drifts from its target on instance " + std::to_string(s));
    }

    auto mech = make_midr_mechanism(cfg, mix_seed(9601, static_cast<std::uint64_t>(s)));
    auto dev = deviation_search(mech, inst, standard_misreports(2, 9603),
                                Rational(1, 1000000));
    require(out, !dev.has_value(),
            "profitable misreport against the auction on instance " + std::to_string(s));
    if (!out.pass) return out;
  }
  out.detail = "50 auction runs satisfy identities, floors and truthfulness";
  return out;
}

// column generation vs fully enumerated configuration program
Outcome criterion8() {
  Outcome out;
  for (int s = 0; s < 30; ++s) {
    auto inst = generate_random_hypergraph(4 + s % 3, 2 + s % 2, 2 + s % 2, 4, 8,
                                           mix_seed(9700, s));
    auto cfg = MidrConfig::defaults_for(inst.num_goods);
    Rational generated = solve_config_lp(inst, cfg).objective;
    Rational enumerated = test_support::enumerate_config_lp(inst, cfg);
    require(out, std::abs(to_double(generated - enumerated)) <= 1e-8,
            "objective mismatch on instance " + std::to_string(s));
    if (!out.pass) return out;
  }
  out.detail = "30 instances match the enumerated objective exactly";
  return out;
}

// the star fixture: exact optimum, relaxation floor, and the tight spots of
// the proxy bound over all 16 allocations
Outcome criterion9() {
  Outcome out;
  auto star = generate_star(4);
  auto opt = solve_bruteforce(star);
  require(out, opt.welfare == Rational(3), "star optimum is not 3");
  require(out, solve_compact_lp(star).objective >= Rational(3), "relaxation below optimum");

  const int B = MidrConfig::defaults_for(4).B;
  require(out, B == 3, "default multiplicity bound is not 3");
  std::vector<HypergraphValuation> proxies;
  for (const auto& v : star.valuations) proxies.push_back(proxy_valuation(v, B));
  for (unsigned mask = 0; mask < 16; ++mask) {
    Allocation alloc;
    alloc.owner.resize(4);
    for (int j = 0; j < 4; ++j) alloc.owner[j] = mask >> j & 1;
    Rational truth = welfare(star, alloc);
    Rational scaled(0);
    for (int i = 0; i < 2; ++i) scaled += proxies[i].value(alloc.bundle_of(i));
    require(out, scaled >= truth / Rational(B * B),
            "proxy bound fails at mask " + std::to_string(mask));
    bool tight = scaled == truth / Rational(B * B);
    require(out, tight == (alloc.owner[0] != 0),
            "tightness pattern wrong at mask " + std::to_string(mask));
  }
  if (out.pass) out.detail = "star optimum, relaxation floor and proxy tightness all verified";
  return out;
}

// coloring mechanism on 100 bounded-degree supports: welfare times colors
// covers the optimum, and realized welfare covers the surrogate
Outcome criterion10() {
  Outcome out;
  for (int s = 0; s < 100; ++s) {
    auto inst = test_support::random_bounded_degree_instance(4 + s % 5, 2 + s % 2, 3, 8,
                                                             mix_seed(9800, s));
    auto mech = chromatic_mechanism(inst);
    int colors = std::stoi(mech.diagnostics.at("colors_used"));
    Rational realized = welfare(inst, mech.allocation);
    Rational opt = solve_bruteforce(inst).welfare;
    require(out, realized >= mech.range_welfare,
            "realized welfare below surrogate on instance " + std::to_string(s));
    require(out, realized * Rational(std::max(colors, 1)) >= opt,
            "color-count guarantee fails on instance " + std::to_string(s));
    if (!out.pass) return out;
  }
  out.detail = "100 bounded-degree instances meet the color-count guarantee exactly";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (selected < 0 || selected > 10) {
    std::cerr << "criterion number must be in 1..10\n";
    return 2;
  }

  Outcome (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                             criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all_pass = true;
  for (int n = 1; n <= 10; ++n) {
    if (selected != 0 && selected != n) continue;
    Outcome out = criteria[n - 1]();
    std::cout << "criterion " << n << (out.pass ? " PASS: " : " FAIL: ") << out.detail << "\n";
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
