#include "convexlab/lp.hpp"

#include <cmath>
#include <cstddef>

#include "convexlab/error.hpp"

namespace convexlab {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-12;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  // Objective row lives at index rows_.
  double& cost(std::size_t c) { return at(rows_, c); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= factor * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Bland: lowest-index improving column, lowest-index basic variable among
  // ratio ties. `allowed` limits entering columns.
  LpStatus run(std::size_t allowed, int& iterations, int max_iterations) {
    while (true) {
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (cost(c) < -kCostTol) {
          enter = c;
          break;
        }
      }
      if (enter == allowed) return LpStatus::kOptimal;
      if (iterations >= max_iterations) return LpStatus::kIterationLimit;
      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(r) / a;
        if (leave == rows_ || ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) return LpStatus::kUnbounded;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, int max_iterations) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.cost.size();
  if (lp.rhs.size() != m || (!lp.free.empty() && lp.free.size() != n)) {
    throw Error(ErrorCode::kInvalidArgument, "solve_lp: inconsistent dimensions");
  }
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw Error(ErrorCode::kInvalidArgument, "solve_lp: ragged constraint row");
  }

  // Structural columns: x+ for every variable, x- for free ones.
  std::vector<std::size_t> negative_col(n, 0);
  std::size_t structural = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (!lp.free.empty() && lp.free[j]) negative_col[j] = structural++;
  }
  std::size_t artificial = 0;
  for (double b : lp.rhs) artificial += b < 0.0 ? 1 : 0;
  const std::size_t slack0 = structural;
  const std::size_t art0 = slack0 + m;
  Tableau t(m, art0 + artificial);

  std::size_t next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      t.at(i, j) = sign * lp.rows[i][j];
      if (negative_col[j]) t.at(i, negative_col[j]) = -sign * lp.rows[i][j];
    }
    t.at(i, slack0 + i) = sign;
    t.rhs(i) = sign * lp.rhs[i];
    if (sign < 0.0) {
      t.at(i, next_art) = 1.0;
      t.basis()[i] = next_art++;
    } else {
      t.basis()[i] = slack0 + i;
    }
  }

  LpResult result;
  if (artificial > 0) {
    // Phase one: minimize the sum of artificials, written in reduced form.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < art0) continue;
      for (std::size_t c = 0; c <= t.cols(); ++c) {
        if (c < art0 || c == t.cols()) t.at(m, c) -= t.at(i, c);
      }
    }
    const LpStatus phase1 = t.run(art0, result.iterations, max_iterations);
    if (phase1 == LpStatus::kIterationLimit) {
      result.status = phase1;
      return result;
    }
    if (-t.rhs(m) > 1e-9) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive remaining zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < art0) continue;
      for (std::size_t c = 0; c < art0; ++c) {
        if (std::abs(t.at(i, c)) > kPivotTol) {
          t.pivot(i, c);
          break;
        }
      }
    }
  }

  // Phase two objective in reduced form.
  for (std::size_t c = 0; c <= t.cols(); ++c) t.at(m, c) = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    t.cost(j) = lp.cost[j];
    if (negative_col[j]) t.cost(negative_col[j]) = -lp.cost[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bc = t.basis()[i];
    const double cb = t.cost(bc);
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= t.cols(); ++c) t.at(m, c) -= cb * t.at(i, c);
  }
  result.status = t.run(art0, result.iterations, max_iterations);
  if (result.status != LpStatus::kOptimal) return result;

  std::vector<double> values(t.cols(), 0.0);
  for (std::size_t i = 0; i < m; ++i) values[t.basis()[i]] = t.rhs(i);
  result.x.assign(n, 0.0);
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    result.x[j] = values[j] - (negative_col[j] ? values[negative_col[j]] : 0.0);
    result.objective += lp.cost[j] * result.x[j];
  }
  return result;
}

}  // namespace convexlab
