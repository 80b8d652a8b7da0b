#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ixpg/errors.hpp"
#include "ixpg/lp.hpp"
#include "ixpg/oracle.hpp"
#include "ixpg/payments.hpp"

using namespace ixpg;

namespace {

// Enumerates every basic point: pick `n` of the constraints and bounds, make
// them tight and keep the feasible solutions. Returns the best objective, or
// nothing when no vertex is feasible.
std::optional<double> vertex_optimum(const LinearProgram& lp) {
  const int n = lp.variables();
  std::vector<Eigen::RowVectorXd> a;
  std::vector<double> b;
  for (int r = 0; r < lp.constraints(); ++r) {
    a.push_back(lp.rows.row(r));
    b.push_back(lp.rhs(r));
  }
  for (int j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e(j) = 1;
    a.push_back(e);
    b.push_back(lp.lower(j));
    a.push_back(e);
    b.push_back(lp.upper(j));
  }
  const int total = static_cast<int>(a.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  // Iterate over n-subsets of the candidate hyperplanes.
  std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd m(n, n);
      Eigen::VectorXd rhs(n);
      for (int d = 0; d < n; ++d) {
        m.row(d) = a[pick[d]];
        rhs(d) = b[pick[d]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if (max_residual(lp, x) > 1e-9) return;
      const double obj = lp.objective.dot(x);
      if (!best || obj < *best) best = obj;
      return;
    }
    for (int c = start; c < total; ++c) {
      pick[depth] = c;
      choose(c + 1, depth + 1);
    }
  };
  choose(0, 0);
  return best;
}

LinearProgram random_program(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> sense(0, 2);
  const int n = size(rng);
  const int rows = std::uniform_int_distribution<int>(0, 6)(rng);
  auto lp = LinearProgram::boxed(n, 0, 0);
  for (int j = 0; j < n; ++j) {
    lp.lower(j) = std::uniform_int_distribution<int>(-3, 1)(rng);
    lp.upper(j) = lp.lower(j) + std::uniform_int_distribution<int>(0, 4)(rng);
    lp.objective(j) = coef(rng);
  }
  for (int r = 0; r < rows; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j) terms.emplace_back(j, coef(rng));
    lp.add_row(terms, static_cast<Sense>(sense(rng)), coef(rng));
  }
  return lp;
}

}  // namespace

TEST_CASE("lp examples") {
  auto one = LinearProgram::boxed(1, 0, 10);
  one.objective(0) = 1;
  one.add_row({{0, 1.0}}, Sense::greater_equal, 3);
  auto res = solve_lp(one);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.values(0) == doctest::Approx(3).epsilon(1e-12));

  auto two = LinearProgram::boxed(2, 0, 1);
  two.objective << 1, 1;
  two.add_row({{0, 1.0}, {1, 1.0}}, Sense::greater_equal, 1);
  res = solve_lp(two);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective == doctest::Approx(1).epsilon(1e-12));

  auto bad = LinearProgram::boxed(1, 0, 1);
  bad.add_row({{0, 1.0}}, Sense::greater_equal, 2);
  CHECK(solve_lp(bad).status == LpStatus::infeasible);

  auto eq = LinearProgram::boxed(2, -1, 1);
  eq.objective << 1, -1;
  eq.add_row({{0, 1.0}, {1, 1.0}}, Sense::equal, 0.5);
  res = solve_lp(eq);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("lp dimension errors") {
  auto lp = LinearProgram::boxed(2, 0, 1);
  lp.rhs.resize(1);
  CHECK_THROWS_AS(solve_lp(lp), InvalidInput);
  auto unbounded = LinearProgram::boxed(1, 0, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(solve_lp(unbounded), InvalidInput);
}

TEST_CASE("lp optimum matches vertex enumeration") {
  std::mt19937_64 rng(91);
  int optimal = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto lp = random_program(rng);
    const auto res = solve_lp(lp);
    const auto vertex = vertex_optimum(lp);
    REQUIRE((res.status == LpStatus::optimal) == vertex.has_value());
    if (!vertex) continue;
    ++optimal;
    CHECK(max_residual(lp, res.values) <= 1e-9);
    CHECK(res.objective <= *vertex + 1e-9);
    CHECK(res.objective >= *vertex - 1e-9);
  }
  CHECK(optimal > 100);
}

TEST_CASE("closed-form minimum payment agrees with its LP") {
  std::mt19937_64 rng(92);
  for (int trial = 0; trial < 150; ++trial) {
    GeneratorParams p;
    p.agents = std::uniform_int_distribution<int>(1, 5)(rng);
    p.facilities = std::uniform_int_distribution<int>(1, 3)(rng);
    const auto inst = random_instance(p, rng);
    Assignment s(inst.agents());
    for (auto& x : s) x = std::uniform_int_distribution<int>(-1, inst.facilities() - 1)(rng);

    // Variables: gamma_i then Delta_i. Minimize sum Delta subject to
    // gamma_i - Delta_i <= Q_i and sum over users of gamma_i = c(f_k).
    const int n = inst.agents();
    const auto q = q_values(inst, s);
    double big = 1;
    for (int k = 0; k < inst.facilities(); ++k) big += inst.fcost(k).to_double();
    for (const auto& qi : q) big += std::abs(qi.value().to_double());
    auto lp = LinearProgram::boxed(2 * n, 0, big);
    for (int i = 0; i < n; ++i) {
      lp.objective(n + i) = 1;
      if (s[i] == kNoFacility) lp.upper(i) = 0;
      lp.add_row({{i, 1.0}, {n + i, -1.0}}, Sense::less_equal, q[i].value().to_double());
    }
    const auto open = open_facilities(inst, s);
    for (int k = 0; k < inst.facilities(); ++k) {
      if (!open[k]) continue;
      std::vector<std::pair<int, double>> terms;
      for (int i : users(s, k)) terms.emplace_back(i, 1.0);
      lp.add_row(terms, Sense::equal, inst.fcost(k).to_double());
    }
    const auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.objective == doctest::Approx(minimum_total_payment(inst, s).to_double()).epsilon(1e-9));
  }
}
