#pragma once

// Linear program container shared by the exact (rational) and floating
// solver instantiations, plus a writer for the textual LP interchange
// format so models can be cross-checked with external solvers.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hgca/rational.hpp"

namespace hgca {

enum class RowSense { le, eq, ge };
enum class LpStatus { optimal, infeasible, unbounded };

// Maximization problem: max c.x subject to rows, x_j >= lower_bound[j].
template <class T>
struct LinearProgramT {
  struct Row {
    std::vector<std::pair<int, T>> terms;
    RowSense sense = RowSense::le;
    T rhs = T(0);
  };

  std::vector<T> objective;
  std::vector<T> lower_bound;
  std::vector<std::string> names;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_variable(T objective_coeff, T lb = T(0), std::string name = {}) {
    objective.push_back(std::move(objective_coeff));
    lower_bound.push_back(std::move(lb));
    names.push_back(std::move(name));
    return num_vars() - 1;
  }

  int add_row(RowSense sense, T rhs) {
    rows.push_back(Row{{}, sense, std::move(rhs)});
    return num_rows() - 1;
  }

  void add_term(int row, int var, T coeff) {
    if (row < 0 || row >= num_rows()) throw std::out_of_range("lp: row out of range");
    if (var < 0 || var >= num_vars()) throw std::out_of_range("lp: variable out of range");
    rows[row].terms.push_back({var, std::move(coeff)});
  }

  // Appends a variable with entries across existing rows.
  int add_column(T objective_coeff, const std::vector<std::pair<int, T>>& entries, T lb = T(0),
                 std::string name = {}) {
    int var = add_variable(std::move(objective_coeff), std::move(lb), std::move(name));
    for (const auto& [row, coeff] : entries) add_term(row, var, coeff);
    return var;
  }
};

// Final solution of a maximization LP. `duals` has one entry per row in the
// original orientation. When status == infeasible, `duals` holds a Farkas
// certificate y: y.A_j <= 0 for every column j while y.b > 0, so a priced
// column with y.A > 0 is what could restore feasibility.
template <class T>
struct LpSolutionT {
  LpStatus status = LpStatus::optimal;
  std::vector<T> primal;
  T objective = T(0);
  std::vector<T> duals;
};

using LinearProgram = LinearProgramT<Rational>;
using LpSolution = LpSolutionT<Rational>;

namespace detail {
inline std::string lp_number(const Rational& x) {
  std::ostringstream out;
  out << std::setprecision(17) << to_double(x);
  return out.str();
}
inline std::string lp_number(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}
}  // namespace detail

template <class T>
void write_lp_format(const LinearProgramT<T>& lp, std::ostream& out) {
  auto name_of = [&](int j) {
    return lp.names[j].empty() ? "x" + std::to_string(j) : lp.names[j];
  };
  out << "Maximize\n obj:";
  for (int j = 0; j < lp.num_vars(); ++j)
    if (!(lp.objective[j] == T(0)))
      out << " + " << detail::lp_number(lp.objective[j]) << " " << name_of(j);
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    out << " c" << i << ":";
    for (const auto& [var, coeff] : lp.rows[i].terms)
      out << " + " << detail::lp_number(coeff) << " " << name_of(var);
    const char* rel = lp.rows[i].sense == RowSense::le   ? "<="
                      : lp.rows[i].sense == RowSense::eq ? "="
                                                         : ">=";
    out << " " << rel << " " << detail::lp_number(lp.rows[i].rhs) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j)
    out << " " << name_of(j) << " >= " << detail::lp_number(lp.lower_bound[j]) << "\n";
  out << "End\n";
}

}  // namespace hgca
