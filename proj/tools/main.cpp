// Command line front end: solve, compare, generate, payments, verify.
// Exit codes: 0 success, 2 usage or input error, 3 verification failure.

#include "CLI11.hpp"
#include "hgca/hgca.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using hgca::Allocation;
using hgca::Instance;
using hgca::Json;
using hgca::Rational;

constexpr std::uint64_t kDefaultSeed = 1729;

using Clock = std::chrono::steady_clock;

std::string join_command(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

Json allocation_json(const Allocation& alloc) {
  Json arr = Json::array();
  for (int owner : alloc.owner) arr.push_back(owner);
  return arr;
}

Json rationals_json(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const auto& q : values) arr.push_back(hgca::format_rational(q));
  return arr;
}

Json diagnostics_json(const std::map<std::string, std::string>& diag) {
  Json obj = Json::object();
  for (const auto& [key, value] : diag) obj[key] = value;
  return obj;
}

void emit(Json& report, Clock::time_point start) {
  report["timing_ms"] =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  std::cout << report.dump(2) << "\n";
}

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

// Unreadable input files count as usage errors, not internal failures.
Instance load_instance_cli(const std::string& path) {
  try {
    return hgca::load_instance(path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
}

// Restricted configuration LP over the optimal support, for text dumps.
hgca::LinearProgram config_lp_over_support(const Instance& inst, const hgca::MidrConfig& cfg,
                                           const hgca::ConfigLpSolution& sol) {
  hgca::LinearProgram lp;
  int n = inst.num_players;
  for (int i = 0; i < n; ++i) lp.add_row(hgca::RowSense::le, Rational(1));
  for (int j = 0; j < inst.num_goods; ++j) lp.add_row(hgca::RowSense::le, Rational(cfg.B));
  for (const auto& col : sol.columns) {
    std::vector<std::pair<int, Rational>> entries;
    entries.push_back({col.player, Rational(1)});
    std::string name = "y_p" + std::to_string(col.player);
    for (int j : col.bundle) {
      entries.push_back({n + j, Rational(1)});
      name += "_" + std::to_string(j);
    }
    Rational value = hgca::proxy_valuation(inst.valuations[col.player], cfg.B).value(col.bundle);
    lp.add_column(value, entries, Rational(0), name);
  }
  return lp;
}

void dump_lp_file(const hgca::LinearProgram& lp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open dump file: " + path);
  hgca::write_lp_format(lp, out);
}

struct AlgorithmFlags {
  bool epsilon = false;
  bool trials = false;
  bool midr = false;    // --B and --alpha
  bool dump_lp = false;
};

AlgorithmFlags flags_for(const std::string& algorithm) {
  AlgorithmFlags f;
  if (algorithm == "baker") f.epsilon = true;
  if (algorithm == "lp-round") {
    f.trials = true;
    f.dump_lp = true;
  }
  if (algorithm == "midr") {
    f.midr = true;
    f.dump_lp = true;
  }
  return f;
}

struct RunOptions {
  std::string algorithm;
  std::string instance_path;
  std::uint64_t seed = kDefaultSeed;
  std::string epsilon = "1/2";
  int trials = 1000;
  int b_value = 0;  // 0 means the size-derived default
  std::string alpha = "2";
  std::string dump_lp;
};

hgca::MidrConfig midr_config(const RunOptions& opt, int num_goods) {
  hgca::MidrConfig cfg = hgca::MidrConfig::defaults_for(num_goods);
  if (opt.b_value > 0) cfg.B = opt.b_value;
  cfg.alpha = hgca::parse_rational(opt.alpha);
  cfg.validate(num_goods);
  return cfg;
}

Json run_options_json(const RunOptions& opt, const AlgorithmFlags& flags) {
  Json cfg = Json::object();
  cfg["algorithm"] = opt.algorithm;
  cfg["instance"] = opt.instance_path;
  cfg["seed"] = opt.seed;
  if (flags.epsilon) cfg["epsilon"] = opt.epsilon;
  if (flags.trials) cfg["trials"] = opt.trials;
  if (flags.midr) {
    cfg["B"] = opt.b_value;
    cfg["alpha"] = opt.alpha;
  }
  if (!opt.dump_lp.empty()) cfg["dump_lp"] = opt.dump_lp;
  return cfg;
}

// Runs one algorithm and fills the outcome object. Shared by solve, payments
// and compare so every command reports identical numbers.
Json run_algorithm(const Instance& inst, const RunOptions& opt) {
  Json outcome = Json::object();
  outcome["algorithm"] = opt.algorithm;
  outcome["seed"] = opt.seed;
  if (opt.algorithm == "brute") {
    auto res = hgca::solve_bruteforce(inst);
    outcome["allocation"] = allocation_json(res.allocation);
    outcome["welfare"] = hgca::format_rational(res.welfare);
  } else if (opt.algorithm == "treewidth") {
    auto td = hgca::build_tree_decomposition(inst.num_goods, hgca::instance_graph_edges(inst));
    auto res = hgca::solve_treewidth(inst, td);
    outcome["allocation"] = allocation_json(res.allocation);
    outcome["welfare"] = hgca::format_rational(res.welfare);
    outcome["diagnostics"] = Json{{"decomposition_width", td.width()}};
  } else if (opt.algorithm == "lp-round") {
    if (!opt.dump_lp.empty()) dump_lp_file(hgca::build_compact_lp(inst).lp, opt.dump_lp);
    auto report = hgca::solve_and_round(inst, opt.trials, opt.seed);
    outcome["allocation"] = allocation_json(report.best_allocation);
    outcome["welfare"] = hgca::format_rational(report.best_welfare);
    outcome["lp_value"] = hgca::format_rational(report.lp_value);
    outcome["ratio_certificate"] = hgca::format_rational(report.ratio_certificate);
    outcome["diagnostics"] = Json{{"mean_welfare", hgca::format_rational(report.mean_welfare)},
                                  {"welfare_stddev", report.welfare_stddev},
                                  {"trials", report.trials},
                                  {"max_rank", hgca::max_rank(inst)}};
  } else if (opt.algorithm == "baker") {
    auto out = hgca::baker_allocate(inst, hgca::parse_rational(opt.epsilon));
    outcome["allocation"] = allocation_json(out.allocation);
    outcome["welfare"] = hgca::format_rational(out.range_welfare);
    outcome["payments"] = rationals_json(out.payments);
    outcome["diagnostics"] = diagnostics_json(out.diagnostics);
  } else if (opt.algorithm == "chromatic") {
    auto out = hgca::chromatic_mechanism(inst);
    outcome["allocation"] = allocation_json(out.allocation);
    outcome["welfare"] = hgca::format_rational(hgca::welfare(inst, out.allocation));
    outcome["payments"] = rationals_json(out.payments);
    Json diag = diagnostics_json(out.diagnostics);
    diag["surrogate_welfare"] = hgca::format_rational(out.range_welfare);
    outcome["diagnostics"] = diag;
  } else if (opt.algorithm == "midr") {
    hgca::MidrConfig cfg = midr_config(opt, inst.num_goods);
    auto res = hgca::run_midr(inst, cfg, opt.seed);
    if (!opt.dump_lp.empty())
      dump_lp_file(config_lp_over_support(inst, res.config, res.lp), opt.dump_lp);
    outcome["allocation"] = allocation_json(res.allocation);
    outcome["welfare"] = hgca::format_rational(hgca::welfare(inst, res.allocation));
    outcome["lp_value"] = hgca::format_rational(res.lp.objective);
    outcome["payments"] = rationals_json(res.payments);
    outcome["diagnostics"] =
        Json{{"expected_proxy_welfare", hgca::format_rational(res.expected_proxy_welfare)},
             {"B", res.config.B},
             {"alpha", hgca::format_rational(res.config.alpha)},
             {"support_columns", res.lp.columns.size()},
             {"lottery_points", res.decomposition.points.size()},
             {"sampled_point", res.sampled_point}};
  } else {
    throw std::invalid_argument("unknown algorithm: " + opt.algorithm);
  }
  return outcome;
}

int run_solve(const RunOptions& opt, const std::string& command, Clock::time_point start) {
  Instance inst = load_instance_cli(opt.instance_path);
  Json report = Json::object();
  report["command"] = command;
  report["config"] = run_options_json(opt, flags_for(opt.algorithm));
  report["outcome"] = run_algorithm(inst, opt);
  emit(report, start);
  return 0;
}

int run_payments(const RunOptions& opt, const std::string& command, Clock::time_point start) {
  Instance inst = load_instance_cli(opt.instance_path);
  Json report = Json::object();
  report["command"] = command;
  report["config"] = run_options_json(opt, flags_for(opt.algorithm));
  if (opt.algorithm == "vcg-brute") {
    auto out = hgca::vcg_over_bruteforce(inst);
    Json outcome = Json::object();
    outcome["algorithm"] = opt.algorithm;
    outcome["seed"] = opt.seed;
    outcome["allocation"] = allocation_json(out.allocation);
    outcome["welfare"] = hgca::format_rational(out.range_welfare);
    outcome["payments"] = rationals_json(out.payments);
    outcome["diagnostics"] = diagnostics_json(out.diagnostics);
    report["outcome"] = outcome;
  } else {
    report["outcome"] = run_algorithm(inst, opt);
    if (!report["outcome"].contains("payments"))
      throw std::invalid_argument("algorithm has no payment rule: " + opt.algorithm);
  }
  emit(report, start);
  return 0;
}

struct CompareRow {
  std::string algorithm;
  Json row;
  bool pass = true;
};

int run_compare(const RunOptions& base, const std::vector<std::string>& algorithms,
                const std::string& command, Clock::time_point start) {
  Instance inst = load_instance_cli(base.instance_path);
  auto opt_res = hgca::solve_bruteforce(inst);
  const Rational opt_welfare = opt_res.welfare;
  Json rows = Json::array();
  for (const auto& name : algorithms) {
    RunOptions opt = base;
    opt.algorithm = name;
    Json outcome = run_algorithm(inst, opt);
    Rational achieved = hgca::parse_rational(outcome["welfare"].get<std::string>());
    Json row = Json::object();
    row["algorithm"] = name;
    row["welfare"] = outcome["welfare"];
    row["optimum"] = hgca::format_rational(opt_welfare);
    row["ratio"] = opt_welfare == 0 ? 1.0 : hgca::to_double(achieved / opt_welfare);
    bool pass = true;
    if (name == "brute" || name == "treewidth") {
      row["bound"] = "exact optimum";
      pass = achieved == opt_welfare;
    } else if (name == "lp-round") {
      int r = hgca::max_rank(inst);
      Rational mean =
          hgca::parse_rational(outcome["diagnostics"]["mean_welfare"].get<std::string>());
      double stddev = outcome["diagnostics"]["welfare_stddev"].get<double>();
      double slack = 3.0 * stddev / std::sqrt(static_cast<double>(opt.trials));
      row["bound"] = "mean welfare >= optimum / " + std::to_string(r) + " - 3 SE";
      pass = hgca::to_double(mean) >= hgca::to_double(opt_welfare / r) - slack;
    } else if (name == "baker") {
      Rational eps = hgca::parse_rational(opt.epsilon);
      Rational bound = (Rational(1) - eps) * opt_welfare;
      row["bound"] = "welfare >= (1 - epsilon) * optimum = " + hgca::format_rational(bound);
      pass = achieved >= bound;
    } else if (name == "chromatic") {
      int colors = std::stoi(outcome["diagnostics"]["colors_used"].get<std::string>());
      row["bound"] = "welfare * colors >= optimum";
      pass = achieved * colors >= opt_welfare;
    } else if (name == "midr") {
      Rational expected = hgca::parse_rational(
          outcome["diagnostics"]["expected_proxy_welfare"].get<std::string>());
      Rational alpha =
          hgca::parse_rational(outcome["diagnostics"]["alpha"].get<std::string>());
      int b_used = outcome["diagnostics"]["B"].get<int>();
      Rational denom = alpha * hgca::rational_pow(Rational(b_used), hgca::max_rank(inst));
      row["bound"] = "expected proxy welfare >= optimum / (alpha * B^r)";
      row["expected_proxy_welfare"] = hgca::format_rational(expected);
      pass = expected >= opt_welfare / denom;
    }
    row["pass"] = pass;
    rows.push_back(row);
  }
  Json report = Json::object();
  report["command"] = command;
  Json cfg = Json::object();
  cfg["instance"] = base.instance_path;
  cfg["seed"] = base.seed;
  cfg["epsilon"] = base.epsilon;
  cfg["trials"] = base.trials;
  report["config"] = cfg;
  report["outcome"] = Json{{"optimum", hgca::format_rational(opt_welfare)}, {"rows", rows}};
  emit(report, start);
  return 0;
}

struct GenerateOptions {
  std::string kind;
  std::string out_path;
  std::uint64_t seed = kDefaultSeed;
  int goods = 4;
  int players = 2;
  int rows = 2;
  int cols = 2;
  int bundle_size = 2;
  int rank = 2;
  int edges = 4;
  int weight_max = 10;
};

int run_generate(const GenerateOptions& opt, const std::string& command,
                 Clock::time_point start) {
  Instance inst = [&] {
    if (opt.kind == "star") return hgca::generate_star(opt.goods);
    if (opt.kind == "grid")
      return hgca::generate_grid(opt.rows, opt.cols, opt.players, opt.seed);
    if (opt.kind == "single-minded")
      return hgca::generate_single_minded(opt.goods, opt.players, opt.bundle_size, opt.seed);
    if (opt.kind == "random")
      return hgca::generate_random_hypergraph(opt.goods, opt.players, opt.rank, opt.edges,
                                              opt.weight_max, opt.seed);
    throw std::invalid_argument("unknown generator kind: " + opt.kind);
  }();
  hgca::save_instance(inst, opt.out_path);
  Json report = Json::object();
  report["command"] = command;
  Json cfg = Json::object();
  cfg["kind"] = opt.kind;
  cfg["out"] = opt.out_path;
  cfg["seed"] = opt.seed;
  report["config"] = cfg;
  report["outcome"] = Json{{"path", opt.out_path},
                           {"num_players", inst.num_players},
                           {"num_goods", inst.num_goods},
                           {"rank", inst.rank()},
                           {"has_support_graph", inst.support_graph.has_value()}};
  emit(report, start);
  return 0;
}

struct VerifyOptions {
  std::string suite;
  std::string instance_path;  // optional
  std::uint64_t seed = kDefaultSeed;
  int count = 0;  // 0 means suite default
  int trials = 2000;
};

void check(Json& failures, bool ok, const std::string& what) {
  if (!ok) failures.push_back(what);
}

std::vector<Instance> verify_instances(const VerifyOptions& opt, int def_count,
                                       bool need_rank2_support) {
  std::vector<Instance> out;
  if (!opt.instance_path.empty()) {
    out.push_back(load_instance_cli(opt.instance_path));
    return out;
  }
  int count = opt.count > 0 ? opt.count : def_count;
  for (int s = 0; s < count; ++s) {
    std::uint64_t seed = hgca::mix_seed(opt.seed, static_cast<std::uint64_t>(s));
    if (need_rank2_support) {
      out.push_back(hgca::generate_grid(1 + s % 2, 2 + s % 3, 2 + s % 2, seed));
    } else {
      int m = 3 + s % 4;
      out.push_back(
          hgca::generate_random_hypergraph(m, 2 + s % 2, std::min(3, m), m, 10, seed));
    }
  }
  return out;
}

int verify_oracle_equivalence(const VerifyOptions& opt, Json& detail, Json& failures) {
  auto instances = verify_instances(opt, 50, false);
  int demand_checks = 0, exact_checks = 0;
  for (std::size_t s = 0; s < instances.size(); ++s) {
    const Instance& inst = instances[s];
    for (int i = 0; i < inst.num_players; ++i) {
      for (int round = 0; round < 3; ++round) {
        auto rng = hgca::derived_rng(hgca::mix_seed(opt.seed, s * 97 + round),
                                     static_cast<std::uint64_t>(i));
        std::vector<Rational> prices(inst.num_goods);
        for (auto& p : prices) p = Rational(rng.next_below(21), 2);
        auto pv = hgca::PriceVector::make(prices);
        auto fast = hgca::demand(inst.valuations[i], pv);
        auto slow = hgca::demand_bruteforce(inst.valuations[i], pv);
        ++demand_checks;
        check(failures,
              fast.bundle == slow.bundle && fast.surplus == slow.surplus,
              "demand mismatch on instance " + std::to_string(s) + " player " +
                  std::to_string(i));
      }
    }
    if (inst.rank() <= 2 && inst.num_goods <= 10) {
      auto td = hgca::build_tree_decomposition(inst.num_goods, hgca::instance_graph_edges(inst));
      auto a = hgca::solve_bruteforce(inst);
      auto b = hgca::solve_treewidth(inst, td);
      ++exact_checks;
      check(failures, a.welfare == b.welfare,
            "exact solver mismatch on instance " + std::to_string(s));
    }
  }
  detail["demand_checks"] = demand_checks;
  detail["exact_solver_checks"] = exact_checks;
  return 0;
}

int verify_rounding_bounds(const VerifyOptions& opt, Json& detail, Json& failures) {
  auto instances = verify_instances(opt, 5, false);
  Json rows = Json::array();
  for (std::size_t s = 0; s < instances.size(); ++s) {
    const Instance& inst = instances[s];
    auto report = hgca::solve_and_round(inst, opt.trials,
                                        hgca::mix_seed(opt.seed, s));
    Rational opt_welfare = hgca::solve_bruteforce(inst).welfare;
    int r = hgca::max_rank(inst);
    double slack = 3.0 * report.welfare_stddev / std::sqrt(static_cast<double>(opt.trials));
    double mean = hgca::to_double(report.mean_welfare);
    bool lp_ok = mean >= hgca::to_double(report.lp_value / r) - slack;
    bool opt_ok = mean >= hgca::to_double(opt_welfare / r) - slack;
    check(failures, lp_ok, "mean welfare below lp bound on instance " + std::to_string(s));
    check(failures, opt_ok, "mean welfare below optimum bound on instance " + std::to_string(s));
    rows.push_back(Json{{"mean_welfare", mean},
                        {"lp_value", hgca::to_double(report.lp_value)},
                        {"optimum", hgca::to_double(opt_welfare)},
                        {"rank", r},
                        {"pass", lp_ok && opt_ok}});
  }
  detail["rows"] = rows;
  return 0;
}

int verify_truthfulness(const VerifyOptions& opt, Json& detail, Json& failures) {
  auto vcg_instances = verify_instances(opt, 5, false);
  auto misreports = hgca::standard_misreports(5, hgca::mix_seed(opt.seed, 0xdeull));
  int searched = 0;
  for (std::size_t s = 0; s < vcg_instances.size(); ++s) {
    Instance inst = vcg_instances[s];
    if (inst.num_goods > 6) continue;
    auto dev = hgca::deviation_search(hgca::make_vcg_bruteforce_mechanism(), inst, misreports,
                                      Rational(0));
    ++searched;
    check(failures, !dev.has_value(),
          "profitable deviation against vcg on instance " + std::to_string(s));
  }
  VerifyOptions grid_opt = opt;
  if (opt.instance_path.empty()) grid_opt.count = std::min(opt.count > 0 ? opt.count : 3, 3);
  auto baker_instances = verify_instances(grid_opt, 3, true);
  for (std::size_t s = 0; s < baker_instances.size(); ++s) {
    const Instance& inst = baker_instances[s];
    if (!inst.support_graph) continue;
    auto dev = hgca::deviation_search(hgca::make_baker_mechanism(Rational(1, 2)), inst,
                                      misreports, Rational(0));
    ++searched;
    check(failures, !dev.has_value(),
          "profitable deviation against baker on instance " + std::to_string(s));
  }
  detail["instances_searched"] = searched;
  return 0;
}

int run_verify(const VerifyOptions& opt, const std::string& command, Clock::time_point start) {
  Json report = Json::object();
  report["command"] = command;
  Json cfg = Json::object();
  cfg["suite"] = opt.suite;
  if (!opt.instance_path.empty()) cfg["instance"] = opt.instance_path;
  cfg["seed"] = opt.seed;
  cfg["count"] = opt.count;
  cfg["trials"] = opt.trials;
  report["config"] = cfg;
  Json detail = Json::object();
  Json failures = Json::array();
  if (opt.suite == "oracle-equivalence") {
    verify_oracle_equivalence(opt, detail, failures);
  } else if (opt.suite == "rounding-bounds") {
    verify_rounding_bounds(opt, detail, failures);
  } else if (opt.suite == "truthfulness") {
    verify_truthfulness(opt, detail, failures);
  } else {
    throw std::invalid_argument("unknown suite: " + opt.suite);
  }
  detail["failures"] = failures;
  detail["pass"] = failures.empty();
  report["outcome"] = detail;
  emit(report, start);
  return failures.empty() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  auto start = Clock::now();
  std::string command = join_command(argc, argv);

  CLI::App app{"welfare maximization and truthful mechanisms for combinatorial "
               "auctions with hypergraph valuations"};
  app.require_subcommand(1);

  RunOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "run one algorithm on an instance");
  solve->add_option("--algorithm", solve_opt.algorithm, "algorithm to run")
      ->required()
      ->check(CLI::IsMember({"brute", "treewidth", "lp-round", "baker", "chromatic", "midr"}));
  solve->add_option("--instance", solve_opt.instance_path, "instance file")->required();
  solve->add_option("--seed", solve_opt.seed, "random seed");
  auto* solve_eps = solve->add_option("--epsilon", solve_opt.epsilon, "baker accuracy target");
  auto* solve_trials =
      solve->add_option("--trials", solve_opt.trials, "rounding trials")->check(CLI::PositiveNumber);
  auto* solve_b = solve->add_option("--B", solve_opt.b_value, "multiplicity bound")
                      ->check(CLI::PositiveNumber);
  auto* solve_alpha = solve->add_option("--alpha", solve_opt.alpha, "scale-down factor");
  auto* solve_dump = solve->add_option("--dump-lp", solve_opt.dump_lp, "write LP text to file");

  RunOptions pay_opt;
  auto* payments = app.add_subcommand("payments", "run a mechanism and report payments");
  payments->add_option("--mechanism", pay_opt.algorithm, "mechanism to run")
      ->required()
      ->check(CLI::IsMember({"vcg-brute", "baker", "chromatic", "midr"}));
  payments->add_option("--instance", pay_opt.instance_path, "instance file")->required();
  payments->add_option("--seed", pay_opt.seed, "random seed");
  auto* pay_eps = payments->add_option("--epsilon", pay_opt.epsilon, "baker accuracy target");
  auto* pay_b = payments->add_option("--B", pay_opt.b_value, "multiplicity bound")
                    ->check(CLI::PositiveNumber);
  auto* pay_alpha = payments->add_option("--alpha", pay_opt.alpha, "scale-down factor");

  RunOptions cmp_opt;
  std::string cmp_algorithms;
  auto* compare = app.add_subcommand("compare", "compare algorithms against the optimum");
  compare->add_option("--instance", cmp_opt.instance_path, "instance file")->required();
  compare->add_option("--algorithms", cmp_algorithms, "comma separated algorithm list")
      ->required();
  compare->add_option("--seed", cmp_opt.seed, "random seed");
  compare->add_option("--epsilon", cmp_opt.epsilon, "baker accuracy target");
  compare->add_option("--trials", cmp_opt.trials, "rounding trials")->check(CLI::PositiveNumber);
  compare->add_option("--B", cmp_opt.b_value, "multiplicity bound")->check(CLI::PositiveNumber);
  compare->add_option("--alpha", cmp_opt.alpha, "scale-down factor");

  GenerateOptions gen_opt;
  auto* generate = app.add_subcommand("generate", "write a synthetic instance file");
  generate->add_option("--kind", gen_opt.kind, "generator family")
      ->required()
      ->check(CLI::IsMember({"star", "grid", "single-minded", "random"}));
  generate->add_option("--out", gen_opt.out_path, "output path")->required();
  generate->add_option("--seed", gen_opt.seed, "random seed");
  generate->add_option("--goods", gen_opt.goods, "number of goods")->check(CLI::PositiveNumber);
  generate->add_option("--players", gen_opt.players, "number of players")
      ->check(CLI::PositiveNumber);
  generate->add_option("--rows", gen_opt.rows, "grid rows")->check(CLI::PositiveNumber);
  generate->add_option("--cols", gen_opt.cols, "grid columns")->check(CLI::PositiveNumber);
  generate->add_option("--bundle-size", gen_opt.bundle_size, "single-minded bundle size")
      ->check(CLI::PositiveNumber);
  generate->add_option("--rank", gen_opt.rank, "maximum hyperedge size")
      ->check(CLI::PositiveNumber);
  generate->add_option("--edges", gen_opt.edges, "hyperedge draws")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--weight-max", gen_opt.weight_max, "maximum integer weight")
      ->check(CLI::NonNegativeNumber);

  VerifyOptions ver_opt;
  auto* verify = app.add_subcommand("verify", "run a property suite, nonzero exit on failure");
  verify->add_option("--suite", ver_opt.suite, "property suite")
      ->required()
      ->check(CLI::IsMember({"oracle-equivalence", "rounding-bounds", "truthfulness"}));
  verify->add_option("--instance", ver_opt.instance_path, "restrict the suite to one instance");
  verify->add_option("--seed", ver_opt.seed, "random seed");
  verify->add_option("--count", ver_opt.count, "instances to generate")
      ->check(CLI::PositiveNumber);
  verify->add_option("--trials", ver_opt.trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) {
      AlgorithmFlags allowed = flags_for(solve_opt.algorithm);
      if (solve_eps->count() && !allowed.epsilon)
        return usage_error("--epsilon only applies to baker");
      if (solve_trials->count() && !allowed.trials)
        return usage_error("--trials only applies to lp-round");
      if ((solve_b->count() || solve_alpha->count()) && !allowed.midr)
        return usage_error("--B and --alpha only apply to midr");
      if (solve_dump->count() && !allowed.dump_lp)
        return usage_error("--dump-lp only applies to lp-round and midr");
      return run_solve(solve_opt, command, start);
    }
    if (payments->parsed()) {
      AlgorithmFlags allowed = flags_for(pay_opt.algorithm);
      if (pay_eps->count() && !allowed.epsilon)
        return usage_error("--epsilon only applies to baker");
      if ((pay_b->count() || pay_alpha->count()) && !allowed.midr)
        return usage_error("--B and --alpha only apply to midr");
      return run_payments(pay_opt, command, start);
    }
    if (compare->parsed()) {
      std::vector<std::string> names;
      std::string token;
      std::istringstream stream(cmp_algorithms);
      while (std::getline(stream, token, ','))
        if (!token.empty()) names.push_back(token);
      if (names.empty()) return usage_error("--algorithms lists no algorithm");
      for (const auto& name : names)
        if (name != "brute" && name != "treewidth" && name != "lp-round" && name != "baker" &&
            name != "chromatic" && name != "midr")
          return usage_error("unknown algorithm: " + name);
      return run_compare(cmp_opt, names, command, start);
    }
    if (generate->parsed()) return run_generate(gen_opt, command, start);
    if (verify->parsed()) return run_verify(ver_opt, command, start);
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  } catch (const std::out_of_range& e) {
    return usage_error(e.what());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return usage_error("no subcommand given");
}
