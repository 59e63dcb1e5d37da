#pragma once

// Dense two-phase tableau simplex with Bland's rule (always on, so cycling
// cannot occur). Instantiated with Rational the solve is exact and the
// comparison tolerance is zero; with double the tolerance is 1e-9.
//
// Duals are recovered from the reduced costs of each row's unit column
// (slack, surplus or artificial); artificial columns are kept through
// phase 2 but barred from entering so this is always possible.

#include <stdexcept>
#include <vector>

#include "hgca/lp.hpp"

namespace hgca {

template <class T>
struct SolverTraits {
  static T tolerance() { return T(0); }
};
template <>
struct SolverTraits<double> {
  static double tolerance() { return 1e-9; }
};

namespace detail {

template <class T>
class SimplexTableau {
 public:
  explicit SimplexTableau(const LinearProgramT<T>& lp) : lp_(lp), tol_(SolverTraits<T>::tolerance()) {
    build();
  }

  LpSolutionT<T> solve() {
    LpSolutionT<T> out;
    if (has_artificials_) {
      set_objective_row(phase1_cost_);
      pivot_until_optimal(/*allow_artificial_entering=*/true);
      if (objective_value_ < -tol_) {
        out.status = LpStatus::infeasible;
        out.duals = recover_duals(phase1_cost_);
        for (auto& y : out.duals) y = -y;
        unflip(out.duals);
        out.objective = T(0);
        return out;
      }
      expel_basic_artificials();
    }
    set_objective_row(phase2_cost_);
    bool bounded = pivot_until_optimal(/*allow_artificial_entering=*/false);
    if (!bounded) {
      out.status = LpStatus::unbounded;
      return out;
    }
    out.status = LpStatus::optimal;
    out.primal.assign(lp_.num_vars(), T(0));
    for (int i = 0; i < rows_; ++i)
      if (basis_[i] < lp_.num_vars()) out.primal[basis_[i]] = rhs_[i];
    for (int j = 0; j < lp_.num_vars(); ++j) out.primal[j] += lp_.lower_bound[j];
    out.objective = objective_value_ + objective_shift_;
    out.duals = recover_duals(phase2_cost_);
    unflip(out.duals);
    return out;
  }

 private:
  void build() {
    rows_ = lp_.num_rows();
    int structurals = lp_.num_vars();
    objective_shift_ = T(0);
    for (int j = 0; j < structurals; ++j)
      objective_shift_ += lp_.objective[j] * lp_.lower_bound[j];

    // Shift variables to zero lower bounds, then orient every row so its
    // right-hand side is nonnegative (the sense mirrors when negated).
    std::vector<std::vector<T>> dense(rows_, std::vector<T>(structurals, T(0)));
    rhs_.assign(rows_, T(0));
    flipped_.assign(rows_, false);
    effective_sense_.clear();
    for (int i = 0; i < rows_; ++i) {
      const auto& row = lp_.rows[i];
      T rhs = row.rhs;
      for (const auto& [var, coeff] : row.terms) {
        dense[i][var] += coeff;
        rhs -= coeff * lp_.lower_bound[var];
      }
      RowSense sense = row.sense;
      if (rhs < T(0)) {
        for (int j = 0; j < structurals; ++j) dense[i][j] = -dense[i][j];
        rhs = -rhs;
        flipped_[i] = true;
        sense = sense == RowSense::le ? RowSense::ge : sense == RowSense::ge ? RowSense::le : RowSense::eq;
      }
      effective_sense_.push_back(sense);
      rhs_[i] = rhs;
    }

    // Column layout from the effective sense: structurals, slack (+1, <=)
    // or surplus (-1, >=) per inequality row, then artificials for >= and
    // = rows.
    slack_col_.assign(rows_, -1);
    artificial_col_.assign(rows_, -1);
    int cols = structurals;
    for (int i = 0; i < rows_; ++i)
      if (effective_sense_[i] != RowSense::eq) slack_col_[i] = cols++;
    first_artificial_ = cols;
    for (int i = 0; i < rows_; ++i)
      if (effective_sense_[i] != RowSense::le) artificial_col_[i] = cols++;
    cols_ = cols;
    has_artificials_ = cols_ > first_artificial_;

    tableau_.assign(rows_, std::vector<T>(cols_, T(0)));
    basis_.assign(rows_, -1);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < structurals; ++j) tableau_[i][j] = dense[i][j];
      if (slack_col_[i] != -1)
        tableau_[i][slack_col_[i]] = effective_sense_[i] == RowSense::le ? T(1) : T(-1);
      if (effective_sense_[i] == RowSense::le) {
        basis_[i] = slack_col_[i];
      } else {
        tableau_[i][artificial_col_[i]] = T(1);
        basis_[i] = artificial_col_[i];
      }
    }

    phase1_cost_.assign(cols_, T(0));
    for (int i = 0; i < rows_; ++i)
      if (artificial_col_[i] != -1) phase1_cost_[artificial_col_[i]] = T(-1);
    phase2_cost_.assign(cols_, T(0));
    for (int j = 0; j < structurals; ++j) phase2_cost_[j] = lp_.objective[j];
  }

  void set_objective_row(const std::vector<T>& cost) {
    objective_row_ = cost;
    objective_value_ = T(0);
    for (int i = 0; i < rows_; ++i) {
      const T& cb = cost[basis_[i]];
      if (cb == T(0)) continue;
      for (int j = 0; j < cols_; ++j) objective_row_[j] -= cb * tableau_[i][j];
      objective_value_ += cb * rhs_[i];
    }
  }

  // Returns false when unbounded.
  bool pivot_until_optimal(bool allow_artificial_entering) {
    for (;;) {
      int entering = -1;
      for (int j = 0; j < cols_; ++j) {
        if (!allow_artificial_entering && j >= first_artificial_) break;
        if (objective_row_[j] > tol_) {
          entering = j;
          break;
        }
      }
      if (entering == -1) return true;
      int leaving = -1;
      T best_ratio = T(0);
      for (int i = 0; i < rows_; ++i) {
        if (tableau_[i][entering] <= tol_) continue;
        T ratio = rhs_[i] / tableau_[i][entering];
        if (leaving == -1 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving == -1) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(int row, int col) {
    T inv = T(1) / tableau_[row][col];
    for (int j = 0; j < cols_; ++j) tableau_[row][j] *= inv;
    rhs_[row] *= inv;
    tableau_[row][col] = T(1);
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      T factor = tableau_[i][col];
      if (factor == T(0)) continue;
      for (int j = 0; j < cols_; ++j) tableau_[i][j] -= factor * tableau_[row][j];
      tableau_[i][col] = T(0);
      rhs_[i] -= factor * rhs_[row];
    }
    T factor = objective_row_[col];
    if (!(factor == T(0))) {
      for (int j = 0; j < cols_; ++j) objective_row_[j] -= factor * tableau_[row][j];
      objective_row_[col] = T(0);
      objective_value_ += factor * rhs_[row];
    }
    basis_[row] = col;
  }

  // After a feasible phase 1, pivot zero-valued artificials out of the
  // basis where possible; rows with no eligible pivot are redundant and
  // keep their artificial at value zero.
  void expel_basic_artificials() {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (int j = 0; j < first_artificial_; ++j) {
        if (tableau_[i][j] > tol_ || tableau_[i][j] < -tol_) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<T> recover_duals(const std::vector<T>& cost) const {
    std::vector<T> duals(rows_, T(0));
    for (int i = 0; i < rows_; ++i) {
      if (artificial_col_[i] != -1) {
        // reduced cost of +e_i column: c_a - y_i
        duals[i] = cost[artificial_col_[i]] - objective_row_[artificial_col_[i]];
      } else if (effective_sense_[i] == RowSense::le) {
        duals[i] = -objective_row_[slack_col_[i]];
      } else {
        duals[i] = objective_row_[slack_col_[i]];
      }
    }
    return duals;
  }

  void unflip(std::vector<T>& duals) const {
    for (int i = 0; i < rows_; ++i)
      if (flipped_[i]) duals[i] = -duals[i];
  }

  const LinearProgramT<T>& lp_;
  T tol_;
  int rows_ = 0, cols_ = 0, first_artificial_ = 0;
  bool has_artificials_ = false;
  std::vector<std::vector<T>> tableau_;
  std::vector<T> rhs_;
  std::vector<int> basis_;
  std::vector<int> slack_col_, artificial_col_;
  std::vector<RowSense> effective_sense_;
  std::vector<bool> flipped_;
  std::vector<T> phase1_cost_, phase2_cost_;
  std::vector<T> objective_row_;
  T objective_value_ = T(0);
  T objective_shift_ = T(0);
};

}  // namespace detail

template <class T>
LpSolutionT<T> solve_lp(const LinearProgramT<T>& lp) {
  detail::SimplexTableau<T> tableau(lp);
  return tableau.solve();
}

}  // namespace hgca
