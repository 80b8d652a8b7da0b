#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ixpg {

inline constexpr double kLpTolerance = 1e-9;

enum class Sense { less_equal, greater_equal, equal };

/// minimize c^T x subject to rows a_r^T x (<=, >=, =) b_r and lo <= x <= hi.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd rows;
  std::vector<Sense> senses;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int variables() const { return static_cast<int>(objective.size()); }
  int constraints() const { return static_cast<int>(rows.rows()); }

  /// Empty program over `n` variables boxed in [lo, hi].
  static LinearProgram boxed(int n, double lo, double hi);
  /// Appends a row given as (variable, coefficient) pairs.
  void add_row(const std::vector<std::pair<int, double>>& terms, Sense sense, double b);
};

enum class LpStatus { optimal, infeasible };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd values;
  double objective = 0;
};

/// Two-phase dense tableau simplex. Entering columns follow the most
/// negative reduced cost; after a run of degenerate pivots the smallest
/// index rule takes over until the objective moves again, which rules out
/// cycling. Throws InvalidInput on inconsistent dimensions or infinite bounds.
LpResult solve_lp(const LinearProgram& program);

/// Largest violation of any row or bound by `x`.
double max_residual(const LinearProgram& program, const Eigen::VectorXd& x);

}  // namespace ixpg
