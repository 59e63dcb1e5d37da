#pragma once

// Generic column generation over the dense simplex solver. The caller keeps
// a restricted master problem and supplies a pricer that inspects the duals
// of the current restricted solution (or its Farkas certificate when the
// restricted problem is infeasible) and returns a column with positive
// reduced cost, or nothing when no improving column exists.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hgca/lp.hpp"
#include "hgca/simplex.hpp"

namespace hgca {

template <typename T>
struct PricedColumnT {
  T objective{};
  std::vector<std::pair<int, T>> entries;  // (row, coefficient)
  T lower_bound{};
  std::string name;
};

using PricedColumn = PricedColumnT<Rational>;

// Solves the master LP to optimality under column generation. `pricer` is
// called with each restricted solution; returning std::nullopt certifies
// optimality (or infeasibility, when the restricted problem is infeasible
// and no column cuts the Farkas certificate). Throws if `max_rounds`
// restricted solves do not converge.
template <typename T, typename Pricer>
LpSolutionT<T> solve_with_pricing(LinearProgramT<T>& lp, Pricer&& pricer,
                                  std::size_t max_rounds = 10000) {
  for (std::size_t round = 0; round < max_rounds; ++round) {
    LpSolutionT<T> sol = solve_lp(lp);
    if (sol.status == LpStatus::unbounded)
      throw std::runtime_error("column generation: restricted problem unbounded");
    std::optional<PricedColumnT<T>> col = pricer(sol);
    if (!col.has_value()) return sol;
    lp.add_column(col->objective, col->entries, col->lower_bound, col->name);
  }
  throw std::runtime_error("column generation: did not converge within round limit");
}

}  // namespace hgca
