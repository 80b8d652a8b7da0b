#include "ixpg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ixpg/errors.hpp"

namespace ixpg {

LinearProgram LinearProgram::boxed(int n, double lo, double hi) {
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(n);
  lp.rows.resize(0, n);
  lp.rhs.resize(0);
  lp.lower = Eigen::VectorXd::Constant(n, lo);
  lp.upper = Eigen::VectorXd::Constant(n, hi);
  return lp;
}

void LinearProgram::add_row(const std::vector<std::pair<int, double>>& terms, Sense sense,
                            double b) {
  const Eigen::Index r = rows.rows();
  rows.conservativeResize(r + 1, variables());
  rows.row(r).setZero();
  for (const auto& [var, coef] : terms) rows(r, var) += coef;
  senses.push_back(sense);
  rhs.conservativeResize(r + 1);
  rhs(r) = b;
}

namespace {

void check_dimensions(const LinearProgram& lp) {
  const int n = lp.variables();
  const int r = static_cast<int>(lp.rows.rows());
  if (lp.rows.cols() != n && r > 0) throw InvalidInput("constraint matrix has the wrong width");
  if (static_cast<int>(lp.senses.size()) != r || lp.rhs.size() != r) {
    throw InvalidInput("constraint senses and right-hand sides must match the rows");
  }
  if (lp.lower.size() != n || lp.upper.size() != n) {
    throw InvalidInput("bounds must have one entry per variable");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower(j)) || !std::isfinite(lp.upper(j))) {
      throw InvalidInput("variable bounds must be finite");
    }
  }
}

// Tableau with the objective in the last row and the right-hand side in the
// last column. basis[r] is the column basic in row r.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double objective() const { return -t_(rows(), cols()); }
  const std::vector<int>& basis() const { return basis_; }
  double value(int r) const { return t_(r, cols()); }

  void set_costs(const Eigen::VectorXd& c) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(c.size()) = c.transpose();
    for (int r = 0; r < rows(); ++r) {
      const double cb = basis_[r] < c.size() ? c(basis_[r]) : 0.0;
      if (cb != 0) t_.row(rows()) -= cb * t_.row(r);
    }
  }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    Eigen::VectorXd col = t_.col(c);
    col(r) = 0;
    t_.noalias() -= col * t_.row(r);
    t_.col(c).setZero();
    t_(r, c) = 1;
    basis_[r] = c;
  }

  // Runs the simplex over the columns in [0, usable).
  void optimize(int usable) {
    int degenerate = 0;
    constexpr int kBlandAfter = 50;
    while (true) {
      const bool bland = degenerate >= kBlandAfter;
      int enter = -1;
      double best = -kLpTolerance;
      for (int c = 0; c < usable; ++c) {
        const double d = t_(rows(), c);
        if (d < best) {
          enter = c;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a <= kLpTolerance) continue;
        const double q = t_(r, cols()) / a;
        if (q < ratio - kLpTolerance ||
            (q <= ratio + kLpTolerance && leave >= 0 && basis_[r] < basis_[leave])) {
          ratio = std::min(ratio, q);
          leave = r;
        }
      }
      // Bounded programs have no unbounded rays.
      if (leave < 0) throw std::logic_error("simplex: unbounded direction in a bounded program");
      degenerate = ratio <= kLpTolerance ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }

  // Moves artificial columns (>= first) out of the basis where possible and
  // drops the rows that are redundant.
  void expel(int first) {
    for (int r = 0; r < rows(); ++r) {
      if (basis_[r] < first) continue;
      int c = 0;
      while (c < first && std::abs(t_(r, c)) <= kLpTolerance) ++c;
      if (c < first) {
        pivot(r, c);
        continue;
      }
      remove_row(r);
      --r;
    }
  }

 private:
  void remove_row(int r) {
    const int last = static_cast<int>(t_.rows()) - 1;
    for (int i = r; i < last; ++i) t_.row(i) = t_.row(i + 1);
    t_.conservativeResize(last, Eigen::NoChange);
    basis_.erase(basis_.begin() + r);
  }

  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& program) {
  check_dimensions(program);
  const int n = program.variables();

  // Shift to y = x - lower >= 0; upper bounds become rows.
  struct Row {
    Eigen::RowVectorXd a;
    Sense sense;
    double b;
  };
  std::vector<Row> rows;
  for (int r = 0; r < program.constraints(); ++r) {
    const Eigen::RowVectorXd a = program.rows.row(r);
    rows.push_back({a, program.senses[r], program.rhs(r) - a.dot(program.lower)});
  }
  for (int j = 0; j < n; ++j) {
    if (program.upper(j) < program.lower(j)) return {};
    Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(n);
    a(j) = 1;
    rows.push_back({a, Sense::less_equal, program.upper(j) - program.lower(j)});
  }
  for (auto& row : rows) {
    if (row.b < 0) {
      row.a = -row.a;
      row.b = -row.b;
      if (row.sense == Sense::less_equal) row.sense = Sense::greater_equal;
      else if (row.sense == Sense::greater_equal) row.sense = Sense::less_equal;
    }
  }

  int slacks = 0;
  int artificials = 0;
  for (const auto& row : rows) {
    if (row.sense != Sense::equal) ++slacks;
    if (row.sense != Sense::less_equal) ++artificials;
  }
  const int m = static_cast<int>(rows.size());
  const int first_artificial = n + slacks;
  const int width = first_artificial + artificials;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, width + 1);
  std::vector<int> basis(m);
  int slack = n;
  int art = first_artificial;
  for (int r = 0; r < m; ++r) {
    t.row(r).head(n) = rows[r].a;
    t(r, width) = rows[r].b;
    switch (rows[r].sense) {
      case Sense::less_equal:
        t(r, slack) = 1;
        basis[r] = slack++;
        break;
      case Sense::greater_equal:
        t(r, slack++) = -1;
        t(r, art) = 1;
        basis[r] = art++;
        break;
      case Sense::equal:
        t(r, art) = 1;
        basis[r] = art++;
        break;
    }
  }

  Tableau tab(std::move(t), std::move(basis));
  if (artificials > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(width);
    phase1.tail(artificials).setOnes();
    tab.set_costs(phase1);
    tab.optimize(width);
    double scale = 1;
    for (const auto& row : rows) scale = std::max(scale, row.b);
    if (tab.objective() > kLpTolerance * scale) return {};
    tab.expel(first_artificial);
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(first_artificial);
  cost.head(n) = program.objective;
  tab.set_costs(cost);
  tab.optimize(first_artificial);

  LpResult out;
  out.status = LpStatus::optimal;
  out.values = program.lower;
  for (int r = 0; r < tab.rows(); ++r) {
    if (tab.basis()[r] < n) out.values(tab.basis()[r]) += tab.value(r);
  }
  // Clamp float noise back into the box.
  out.values = out.values.cwiseMax(program.lower).cwiseMin(program.upper);
  out.objective = program.objective.dot(out.values);
  return out;
}

double max_residual(const LinearProgram& program, const Eigen::VectorXd& x) {
  double worst = 0;
  for (int j = 0; j < program.variables(); ++j) {
    worst = std::max({worst, program.lower(j) - x(j), x(j) - program.upper(j)});
  }
  for (int r = 0; r < program.constraints(); ++r) {
    const double lhs = program.rows.row(r).dot(x);
    const double b = program.rhs(r);
    switch (program.senses[r]) {
      case Sense::less_equal: worst = std::max(worst, lhs - b); break;
      case Sense::greater_equal: worst = std::max(worst, b - lhs); break;
      case Sense::equal: worst = std::max(worst, std::abs(lhs - b)); break;
    }
  }
  return worst;
}

}  // namespace ixpg
