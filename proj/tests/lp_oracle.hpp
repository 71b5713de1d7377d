#pragma once

// Independent LP oracle: enumerate all candidate vertices of the (bounded)
// feasible polytope by activating n constraints at a time and solving the
// resulting linear system with Gaussian elimination. Only valid when every
// variable has finite bounds. Intentionally shares no code with solve_lp.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "mec/lp.hpp"

namespace mec::testing {

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
};

inline std::optional<std::vector<double>> gauss_solve(
    std::vector<std::vector<double>> a, std::vector<double> b) {
  int n = (int)b.size();
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 1e-9;
    for (int r = col; r < n; ++r)
      if (std::fabs(a[r][col]) > best) {
        best = std::fabs(a[r][col]);
        piv = r;
      }
    if (piv < 0) return std::nullopt;  // singular
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline OracleResult lp_vertex_oracle(const LpProblem& p, double tol = 1e-7) {
  int n = p.n_vars();
  // Constraint list: every row as an equality candidate, plus both bounds.
  struct C {
    std::vector<double> a;
    double b;
    int sense;  // -1 le, 0 eq, +1 ge (as written: a.x <sense> b)
  };
  std::vector<C> cons;
  for (const auto& r : p.rows) {
    C c{std::vector<double>(n, 0.0), r.rhs,
        r.rel == Relation::le ? -1 : (r.rel == Relation::ge ? 1 : 0)};
    for (auto [v, coef] : r.coeffs) c.a[v] += coef;
    cons.push_back(std::move(c));
  }
  for (int v = 0; v < n; ++v) {
    C lo{std::vector<double>(n, 0.0), p.lo[v], 1};
    lo.a[v] = 1;
    cons.push_back(std::move(lo));
    C hi{std::vector<double>(n, 0.0), p.hi[v], -1};
    hi.a[v] = 1;
    cons.push_back(std::move(hi));
  }
  int m = (int)cons.size();

  auto feasible_point = [&](const std::vector<double>& x) {
    for (const auto& c : cons) {
      double lhs = 0;
      for (int v = 0; v < n; ++v) lhs += c.a[v] * x[v];
      if (c.sense <= 0 && lhs > c.b + tol) return false;
      if (c.sense >= 0 && lhs < c.b - tol) return false;
    }
    return true;
  };

  OracleResult out;
  std::vector<int> pick(n);
  // Enumerate all n-subsets of the m constraints.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i : idx) {
      a.push_back(cons[i].a);
      b.push_back(cons[i].b);
    }
    if (auto x = gauss_solve(std::move(a), std::move(b)); x && feasible_point(*x)) {
      double obj = 0;
      for (int v = 0; v < n; ++v) obj += p.objective[v] * (*x)[v];
      if (!out.feasible || obj < out.objective) {
        out.feasible = true;
        out.objective = obj;
        out.x = *x;
      }
    }
    // next combination
    int i = n - 1;
    while (i >= 0 && idx[i] == m - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Random boxed LP with 2-4 vars and a few mixed-sense rows.
inline LpProblem random_boxed_lp(std::mt19937& rng) {
  LpProblem p;
  int n = 2 + int(rng() % 3);
  for (int v = 0; v < n; ++v) {
    double lo = double(rng() % 3);
    double hi = lo + 1 + double(rng() % 8);
    double cost = double(int(rng() % 21) - 10) / 2.0;
    p.add_variable(cost, lo, hi);
  }
  int n_rows = 1 + int(rng() % 4);
  for (int r = 0; r < n_rows; ++r) {
    LpRow row;
    for (int v = 0; v < n; ++v) {
      int coef = int(rng() % 7) - 3;
      if (coef) row.coeffs.push_back({v, (double)coef});
    }
    if (row.coeffs.empty()) row.coeffs.push_back({int(rng() % n), 1.0});
    int s = int(rng() % 3);
    row.rel = s == 0 ? Relation::le : (s == 1 ? Relation::ge : Relation::eq);
    row.rhs = double(int(rng() % 41) - 10);
    // Equalities with random rhs are almost always infeasible; keep a few but
    // bias toward satisfiable rows by anchoring rhs to a random box point.
    if (rng() % 2) {
      double lhs = 0;
      for (auto [v, c] : row.coeffs)
        lhs += c * (p.lo[v] + double(rng() % 100) / 99.0 * (p.hi[v] - p.lo[v]));
      row.rhs = std::round(lhs * 2) / 2;
    }
    p.add_row(std::move(row));
  }
  return p;
}

}  // namespace mec::testing
