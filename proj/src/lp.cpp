#include "stlplan/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace stlplan::lp {

std::size_t Problem::add_variable(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return cost.size() - 1;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr std::size_t kBlandAfter = 50;  // consecutive degenerate pivots before switching rules

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), t_(rows * cols, 0.0), beta_(rows, 0.0), upper_(cols, kInf), basis_(rows, 0),
        basic_(cols, 0), at_upper_(cols, 0), d_(cols, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * n_ + j]; }

  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<double> beta_;
  std::vector<double> upper_;
  std::vector<std::size_t> basis_;
  std::vector<std::uint8_t> basic_;
  std::vector<std::uint8_t> at_upper_;
  std::vector<double> d_;

  void price(const std::vector<double>& c) {
    d_ = c;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) d_[j] -= cb * row[j];
    }
  }

  void pivot(std::size_t r, std::size_t j) {
    double* prow = &t_[r * n_];
    const double inv = 1.0 / prow[j];
    for (std::size_t k = 0; k < n_; ++k) prow[k] *= inv;
    prow[j] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * n_];
      const double f = row[j];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n_; ++k) row[k] -= f * prow[k];
      row[j] = 0.0;
    }
    const double f = d_[j];
    if (f != 0.0) {
      for (std::size_t k = 0; k < n_; ++k) d_[k] -= f * prow[k];
      d_[j] = 0.0;
    }
  }

  // Returns kOptimal, kUnbounded or kIterationLimit.
  Status run(const std::vector<double>& c, std::size_t allowed_cols, std::size_t& iterations, std::size_t max_it) {
    price(c);
    std::size_t degenerate_run = 0;
    while (iterations < max_it) {
      const bool bland = degenerate_run > kBlandAfter;
      std::size_t enter = n_;
      double best = kCostTol;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (basic_[j] || upper_[j] == 0.0) continue;
        double score = 0.0;
        if (!at_upper_[j] && d_[j] < -kCostTol) score = -d_[j];
        else if (at_upper_[j] && d_[j] > kCostTol) score = d_[j];
        else continue;
        if (bland) { enter = j; break; }
        if (score > best) { best = score; enter = j; }
      }
      if (enter == n_) return Status::kOptimal;
      ++iterations;

      const double delta = at_upper_[enter] ? -1.0 : 1.0;
      double step = upper_[enter];
      std::size_t leave = m_;
      bool leave_to_upper = false;
      double leave_mag = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter) * delta;
        double lim;
        bool to_upper;
        if (a > kPivotTol) {
          lim = beta_[i] / a;
          to_upper = false;
        } else if (a < -kPivotTol && std::isfinite(upper_[basis_[i]])) {
          lim = (upper_[basis_[i]] - beta_[i]) / (-a);
          to_upper = true;
        } else {
          continue;
        }
        lim = std::max(lim, 0.0);
        const double mag = std::abs(a);
        bool take = lim < step - 1e-12;
        if (!take && lim <= step + 1e-12 && leave != m_) {
          take = bland ? basis_[i] < basis_[leave] : mag > leave_mag;
        } else if (!take && lim <= step + 1e-12 && leave == m_ && !std::isfinite(step)) {
          take = true;
        }
        if (take) {
          step = lim;
          leave = i;
          leave_to_upper = to_upper;
          leave_mag = mag;
        }
      }
      if (!std::isfinite(step)) return Status::kUnbounded;

      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a != 0.0) beta_[i] -= delta * step * a;
      }
      if (leave == m_) {
        at_upper_[enter] = !at_upper_[enter];
      } else {
        const std::size_t old = basis_[leave];
        const double entering_value = (at_upper_[enter] ? upper_[enter] : 0.0) + delta * step;
        basic_[old] = 0;
        at_upper_[old] = leave_to_upper ? 1 : 0;
        pivot(leave, enter);
        basis_[leave] = enter;
        basic_[enter] = 1;
        at_upper_[enter] = 0;
        beta_[leave] = entering_value;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        const double u = upper_[basis_[i]];
        if (beta_[i] < 0.0 && beta_[i] > -kFeasTol) beta_[i] = 0.0;
        if (std::isfinite(u) && beta_[i] > u && beta_[i] < u + kFeasTol) beta_[i] = u;
      }
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;
    }
    return Status::kIterationLimit;
  }

  double value_of(std::size_t col) const {
    if (!basic_[col]) return at_upper_[col] ? upper_[col] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] == col) return beta_[i];
    }
    return 0.0;
  }
};

}  // namespace

Result solve(const Problem& p, std::size_t max_iterations) {
  const std::size_t n = p.cost.size();
  if (p.lower.size() != n || p.upper.size() != n) throw std::invalid_argument("LP bound vectors size mismatch");

  Result res;
  res.x.assign(n, 0.0);

  // Columns only for variables with a nontrivial range.
  std::vector<std::size_t> col_of(n, SIZE_MAX);
  std::vector<std::size_t> var_of_col;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(p.lower[j])) throw std::invalid_argument("LP variables need finite lower bounds");
    if (p.upper[j] < p.lower[j] - kFeasTol) {
      res.status = Status::kInfeasible;
      return res;
    }
    if (p.upper[j] - p.lower[j] > 1e-12) {
      col_of[j] = var_of_col.size();
      var_of_col.push_back(j);
    }
  }
  const std::size_t ns = var_of_col.size();
  const std::size_t m = p.rows.size();
  std::size_t nslack = 0;
  for (const auto& r : p.rows) nslack += r.sense != Sense::kEqual ? 1 : 0;
  const std::size_t ncols = ns + nslack + m;

  Tableau tab(m, ncols);
  for (std::size_t k = 0; k < ns; ++k) tab.upper_[k] = p.upper[var_of_col[k]] - p.lower[var_of_col[k]];

  std::size_t slack = ns;
  for (std::size_t i = 0; i < m; ++i) {
    const Row& row = p.rows[i];
    double rhs = row.rhs;
    for (const auto& [j, a] : row.coeffs) {
      if (j >= n) throw std::invalid_argument("LP row references an unknown variable");
      rhs -= a * p.lower[j];
      if (col_of[j] != SIZE_MAX) tab.at(i, col_of[j]) += a;
    }
    if (row.sense == Sense::kLessEqual) tab.at(i, slack++) = 1.0;
    if (row.sense == Sense::kGreaterEqual) tab.at(i, slack++) = -1.0;
    if (rhs < 0.0) {
      for (std::size_t k = 0; k < ns + nslack; ++k) tab.at(i, k) = -tab.at(i, k);
      rhs = -rhs;
    }
    const std::size_t art = ns + nslack + i;
    tab.at(i, art) = 1.0;
    tab.basis_[i] = art;
    tab.basic_[art] = 1;
    tab.beta_[i] = rhs;
  }

  // Phase one: drive the artificials to zero.
  std::vector<double> c1(ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i) c1[ns + nslack + i] = 1.0;
  Status st = tab.run(c1, ncols, res.iterations, max_iterations);
  if (st == Status::kIterationLimit) {
    res.status = st;
    return res;
  }
  double infeas = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    scale = std::max(scale, std::abs(p.rows[i].rhs));
    if (tab.basis_[i] >= ns + nslack) infeas += tab.beta_[i];
  }
  if (infeas > kFeasTol * scale) {
    res.status = Status::kInfeasible;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis_[i] >= ns + nslack && tab.beta_[i] > kFeasTol) res.infeasible_rows.push_back(tab.basis_[i] - ns - nslack);
    }
    std::sort(res.infeasible_rows.begin(), res.infeasible_rows.end());
    return res;
  }

  // Phase two: artificials pinned at zero and never re-enter.
  for (std::size_t i = 0; i < m; ++i) tab.upper_[ns + nslack + i] = 0.0;
  std::vector<double> c2(ncols, 0.0);
  for (std::size_t k = 0; k < ns; ++k) c2[k] = p.cost[var_of_col[k]];
  st = tab.run(c2, ns + nslack, res.iterations, max_iterations);
  if (st != Status::kOptimal) {
    res.status = st;
    return res;
  }

  for (std::size_t j = 0; j < n; ++j) res.x[j] = p.lower[j];
  for (std::size_t k = 0; k < ns; ++k) {
    const std::size_t j = var_of_col[k];
    res.x[j] = std::clamp(p.lower[j] + tab.value_of(k), p.lower[j], p.upper[j]);
  }
  res.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.objective += p.cost[j] * res.x[j];
  res.status = Status::kOptimal;
  return res;
}

}  // namespace stlplan::lp
