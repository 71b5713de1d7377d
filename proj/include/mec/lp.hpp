#pragma once

#include <string>
#include <vector>

#include "mec/topology.hpp"  // kUnbounded

namespace mec {

enum class Relation { le, eq, ge };

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;  // sparse (var, coefficient)
  Relation rel = Relation::le;
  double rhs = 0.0;
  std::string name;  // optional, used in violation reports
};

// Minimization problem over variables with [lo, hi] bounds, lo >= 0 default.
struct LpProblem {
  std::vector<double> objective;
  std::vector<double> lo, hi;
  std::vector<LpRow> rows;

  int n_vars() const { return (int)objective.size(); }
  int add_variable(double cost, double lower = 0.0, double upper = kUnbounded);
  void add_row(LpRow row);

  std::string dump() const;  // row-oriented text form for external cross-checks
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> values;
  double objective = 0.0;
};

struct LpOptions {
  double feas_abs_tol = 1e-7;
  double feas_rel_tol = 1e-9;
  double opt_tol = 1e-9;
  int bland_stall_threshold = 50;  // non-improving pivots before Bland's rule
  int max_pivots = 2'000'000;
};

// Two-phase dense-tableau simplex, deterministic for fixed input.
LpSolution solve_lp(const LpProblem& p, const LpOptions& opts = {});

struct LpViolation {
  std::string what;
  double amount = 0.0;
};

// Primal feasibility + objective recomputation at tolerance tol.
std::vector<LpViolation> verify_solution(const LpProblem& p, const LpSolution& s,
                                         double tol);

}  // namespace mec
