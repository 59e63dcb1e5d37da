#pragma once

// Clarke-pivot payments over an arbitrary range optimizer. Truthfulness
// needs the optimizer to return an exact argmax over a range of outcomes
// that does not depend on the reported valuations; every mechanism here
// passes such an optimizer.

#include <map>
#include <string>
#include <vector>

#include "hgca/exact.hpp"
#include "hgca/rational.hpp"
#include "hgca/valuation.hpp"

namespace hgca {

struct MechanismOutcome {
  Allocation allocation;
  std::vector<Rational> payments;
  Rational range_welfare;  // optimum the mechanism maximized, equals the
                           // welfare of `allocation` under the reports
  std::map<std::string, std::string> diagnostics;
};

// payment_i = (range optimum with player i zeroed out)
//           - (welfare of the chosen allocation to everyone but i).
// `range_optimum` maps an instance to its exact optimum value over the
// mechanism's fixed range. Payments land in [0, v_i(bundle_i)].
template <typename RangeValueOptimizer>
std::vector<Rational> vcg_payments(const Instance& inst, const Allocation& chosen,
                                   RangeValueOptimizer&& range_optimum) {
  std::vector<Rational> payments(inst.num_players);
  for (int i = 0; i < inst.num_players; ++i) {
    Instance without = zero_player(inst, i);
    Rational alternative = range_optimum(without);
    Rational others = welfare(without, chosen);
    payments[i] = alternative - others;
  }
  return payments;
}

// Exact welfare maximization with Clarke payments; the range is every
// allocation, so this is the reference truthful mechanism at small sizes.
inline MechanismOutcome vcg_over_bruteforce(const Instance& inst) {
  SolveResult result = solve_bruteforce(inst);
  MechanismOutcome out;
  out.allocation = result.allocation;
  out.range_welfare = result.welfare;
  out.payments = vcg_payments(inst, result.allocation, [](const Instance& sub) {
    return solve_bruteforce(sub).welfare;
  });
  out.diagnostics["algorithm"] = "vcg_bruteforce";
  return out;
}

}  // namespace hgca
