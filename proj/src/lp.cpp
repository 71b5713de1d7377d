#include "mec/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mec {

int LpProblem::add_variable(double cost, double lower, double upper) {
  if (!(lower >= 0.0)) throw std::runtime_error("variable lower bound must be >= 0");
  if (upper < lower) throw std::runtime_error("variable upper bound below lower");
  objective.push_back(cost);
  lo.push_back(lower);
  hi.push_back(upper);
  return (int)objective.size() - 1;
}

void LpProblem::add_row(LpRow row) {
  for (const auto& [v, c] : row.coeffs) {
    if (v < 0 || v >= n_vars()) throw std::runtime_error("row references unknown variable");
    if (!std::isfinite(c)) throw std::runtime_error("non-finite row coefficient");
  }
  if (!std::isfinite(row.rhs)) throw std::runtime_error("non-finite rhs");
  rows.push_back(std::move(row));
}

std::string LpProblem::dump() const {
  std::ostringstream os;
  os << "min";
  for (int j = 0; j < n_vars(); ++j) os << " " << objective[j] << "*x" << j;
  os << "\n";
  for (const auto& r : rows) {
    for (const auto& [v, c] : r.coeffs) os << c << "*x" << v << " ";
    os << (r.rel == Relation::le ? "<=" : r.rel == Relation::eq ? "=" : ">=")
       << " " << r.rhs;
    if (!r.name.empty()) os << "  # " << r.name;
    os << "\n";
  }
  for (int j = 0; j < n_vars(); ++j) {
    os << lo[j] << " <= x" << j;
    if (hi[j] != kUnbounded) os << " <= " << hi[j];
    os << "\n";
  }
  return os.str();
}

namespace {

constexpr double kEps = 1e-11;

// Dense two-phase tableau simplex over the shifted problem (all lower bounds
// moved to 0, finite upper bounds as extra rows).
class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opts) : p_(p), opts_(opts) {}

  LpSolution run() {
    build();
    if (!phase1()) return {LpStatus::infeasible, {}, 0.0};
    load_phase2_costs();
    if (!optimize(false)) return {LpStatus::unbounded, {}, 0.0};
    return extract();
  }

 private:
  const LpProblem& p_;
  const LpOptions& opts_;
  int n_ = 0;          // structural vars
  int n_total_ = 0;    // structural + slack + artificial
  int n_art_begin_ = 0;
  int m_ = 0;
  std::vector<std::vector<double>> T_;  // m_ rows x (n_total_ + 1); last col rhs
  std::vector<double> obj_;             // reduced-cost row, size n_total_ + 1
  std::vector<int> basis_;
  double shift_const_ = 0.0;

  void build() {
    n_ = p_.n_vars();
    struct Std {
      std::vector<double> a;
      Relation rel;
      double rhs;
    };
    std::vector<Std> rows;
    for (const auto& r : p_.rows) {
      Std s;
      s.a.assign(n_, 0.0);
      for (const auto& [v, c] : r.coeffs) s.a[v] += c;
      s.rel = r.rel;
      s.rhs = r.rhs;
      for (int j = 0; j < n_; ++j) s.rhs -= s.a[j] * p_.lo[j];
      rows.push_back(std::move(s));
    }
    for (int j = 0; j < n_; ++j) {
      if (p_.hi[j] == kUnbounded) continue;
      Std s;
      s.a.assign(n_, 0.0);
      s.a[j] = 1.0;
      s.rel = Relation::le;
      s.rhs = p_.hi[j] - p_.lo[j];
      rows.push_back(std::move(s));
    }
    for (auto& s : rows) {
      if (s.rhs < 0) {
        for (double& a : s.a) a = -a;
        s.rhs = -s.rhs;
        if (s.rel == Relation::le) s.rel = Relation::ge;
        else if (s.rel == Relation::ge) s.rel = Relation::le;
      }
    }
    m_ = (int)rows.size();

    int n_slack = 0, n_art = 0;
    for (const auto& s : rows)
      if (s.rel != Relation::eq) ++n_slack;
    for (const auto& s : rows)
      if (s.rel != Relation::le) ++n_art;
    n_art_begin_ = n_ + n_slack;
    n_total_ = n_ + n_slack + n_art;

    T_.assign(m_, std::vector<double>(n_total_ + 1, 0.0));
    basis_.assign(m_, -1);
    int slack = n_, art = n_art_begin_;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) T_[i][j] = rows[i].a[j];
      T_[i][n_total_] = rows[i].rhs;
      if (rows[i].rel == Relation::le) {
        T_[i][slack] = 1.0;
        basis_[i] = slack++;
      } else if (rows[i].rel == Relation::ge) {
        T_[i][slack++] = -1.0;
        T_[i][art] = 1.0;
        basis_[i] = art++;
      } else {
        T_[i][art] = 1.0;
        basis_[i] = art++;
      }
    }
    for (int j = 0; j < n_; ++j) shift_const_ += p_.objective[j] * p_.lo[j];
  }

  // Rebuilds the reduced-cost row for given structural costs.
  void price(const std::vector<double>& cost) {
    obj_.assign(n_total_ + 1, 0.0);
    for (int j = 0; j < (int)cost.size(); ++j) obj_[j] = cost[j];
    for (int i = 0; i < m_; ++i) {
      double cb = basis_[i] < (int)cost.size() ? cost[basis_[i]] : 0.0;
      if (cb == 0.0) continue;
      for (int j = 0; j <= n_total_; ++j) obj_[j] -= cb * T_[i][j];
    }
  }

  bool phase1() {
    std::vector<double> cost(n_total_, 0.0);
    for (int j = n_art_begin_; j < n_total_; ++j) cost[j] = 1.0;
    price(cost);
    if (!optimize(true)) throw std::runtime_error("phase-1 unbounded");
    double infeas = -obj_[n_total_];  // phase-1 objective value
    if (infeas > opts_.feas_abs_tol) return false;
    // Pivot artificials out of the basis; rows that admit no pivot are
    // redundant and get dropped so phase 2 cannot grow them again.
    std::vector<int> drop;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_art_begin_) continue;
      int piv = -1;
      for (int j = 0; j < n_art_begin_; ++j)
        if (std::fabs(T_[i][j]) > 1e-8) {
          piv = j;
          break;
        }
      if (piv != -1)
        pivot(i, piv);
      else
        drop.push_back(i);
    }
    for (auto it = drop.rbegin(); it != drop.rend(); ++it) {
      T_.erase(T_.begin() + *it);
      basis_.erase(basis_.begin() + *it);
      --m_;
    }
    return true;
  }

  void load_phase2_costs() {
    std::vector<double> cost(n_total_, 0.0);
    for (int j = 0; j < n_; ++j) cost[j] = p_.objective[j];
    price(cost);
  }

  void pivot(int row, int col) {
    double pv = T_[row][col];
    for (int j = 0; j <= n_total_; ++j) T_[row][j] /= pv;
    T_[row][col] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      double f = T_[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_total_; ++j) T_[i][j] -= f * T_[row][j];
      T_[i][col] = 0.0;
    }
    double f = obj_[col];
    if (f != 0.0) {
      for (int j = 0; j <= n_total_; ++j) obj_[j] -= f * T_[row][j];
      obj_[col] = 0.0;
    }
    basis_[row] = col;
  }

  // Returns false on unbounded. In phase 1 artificial variables may re-enter
  // only while they are basic; we simply never let them enter again.
  bool optimize(bool phase1) {
    int limit = phase1 ? n_total_ : n_art_begin_;
    int stall = 0;
    bool bland = false;
    double last_obj = obj_[n_total_];
    for (int it = 0; it < opts_.max_pivots; ++it) {
      int enter = -1;
      if (!bland) {
        double best = -opts_.opt_tol;
        for (int j = 0; j < limit; ++j)
          if (obj_[j] < best) {
            best = obj_[j];
            enter = j;
          }
      } else {
        for (int j = 0; j < limit; ++j)
          if (obj_[j] < -opts_.opt_tol) {
            enter = j;
            break;
          }
      }
      if (enter == -1) return true;

      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m_; ++i) {
        double a = T_[i][enter];
        if (a <= kEps) continue;
        double ratio = T_[i][n_total_] / a;
        if (leave == -1 || ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == -1) return false;  // unbounded direction
      pivot(leave, enter);

      double cur = obj_[n_total_];
      if (last_obj - cur < 1e-12) {
        if (++stall >= opts_.bland_stall_threshold) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
      last_obj = cur;
    }
    throw std::runtime_error("simplex pivot limit exceeded");
  }

  LpSolution extract() {
    LpSolution s;
    s.status = LpStatus::optimal;
    s.values.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) s.values[basis_[i]] = T_[i][n_total_];
    for (int j = 0; j < n_; ++j) {
      s.values[j] += p_.lo[j];
      if (std::fabs(s.values[j]) < 1e-12) s.values[j] = 0.0;
    }
    s.objective = 0.0;
    for (int j = 0; j < n_; ++j) s.objective += p_.objective[j] * s.values[j];
    return s;
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, const LpOptions& opts) {
  Simplex s(p, opts);
  return s.run();
}

std::vector<LpViolation> verify_solution(const LpProblem& p, const LpSolution& s,
                                         double tol) {
  std::vector<LpViolation> out;
  if (s.status != LpStatus::optimal) {
    out.push_back({"solution is not optimal", 0.0});
    return out;
  }
  if ((int)s.values.size() != p.n_vars()) {
    out.push_back({"value vector size mismatch", 0.0});
    return out;
  }
  for (int j = 0; j < p.n_vars(); ++j) {
    if (s.values[j] < p.lo[j] - tol)
      out.push_back({"lower bound violated on x" + std::to_string(j),
                     p.lo[j] - s.values[j]});
    if (p.hi[j] != kUnbounded && s.values[j] > p.hi[j] + tol)
      out.push_back({"upper bound violated on x" + std::to_string(j),
                     s.values[j] - p.hi[j]});
  }
  for (size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r];
    double lhs = 0.0;
    for (const auto& [v, c] : row.coeffs) lhs += c * s.values[v];
    double scale = std::max(1.0, std::fabs(row.rhs));
    double slack = lhs - row.rhs;
    bool bad = (row.rel == Relation::le && slack > tol * scale) ||
               (row.rel == Relation::ge && slack < -tol * scale) ||
               (row.rel == Relation::eq && std::fabs(slack) > tol * scale);
    if (bad) {
      std::string name = row.name.empty() ? "row " + std::to_string(r) : row.name;
      out.push_back({"constraint violated: " + name, std::fabs(slack)});
    }
  }
  double obj = 0.0;
  for (int j = 0; j < p.n_vars(); ++j) obj += p.objective[j] * s.values[j];
  if (std::fabs(obj - s.objective) > tol * std::max(1.0, std::fabs(obj)))
    out.push_back({"objective mismatch", std::fabs(obj - s.objective)});
  return out;
}

}  // namespace mec
