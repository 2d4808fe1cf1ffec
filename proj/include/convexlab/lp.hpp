#pragma once

#include <vector>

namespace convexlab {

/// minimize cost . x subject to rows[i] . x <= rhs[i]; variables flagged in
/// `free` are unrestricted in sign, the rest are >= 0.
struct LinearProgram {
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> cost;
  std::vector<bool> free;

  void add_row(std::vector<double> row, double bound) {
    rows.push_back(std::move(row));
    rhs.push_back(bound);
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule. Intended for
/// small, well-scaled problems (entries of order one).
LpResult solve_lp(const LinearProgram& lp, int max_iterations);

}  // namespace convexlab
