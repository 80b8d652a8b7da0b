#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ixpg/errors.hpp"
#include "ixpg/payments.hpp"

using namespace ixpg;
using ixpg::test::r;

namespace {

constexpr Strategy f1 = 0;
constexpr Strategy none = kNoFacility;

Instance sample(std::mt19937_64& rng, int max_agents = 6) {
  GeneratorParams p;
  p.agents = std::uniform_int_distribution<int>(1, max_agents)(rng);
  p.facilities = std::uniform_int_distribution<int>(1, 3)(rng);
  p.density = 0.8;
  return random_instance(p, rng);
}

// Peering results must keep payments inside dc, only between users of the
// same facility, balance every facility and satisfy the Q-value test.
void check_peering(const Instance& inst, const Assignment& s, const PeeringResult& res) {
  REQUIRE(res.feasible);
  const int n = inst.agents();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CHECK(res.p(i, j) == -res.p(j, i));
      CHECK(abs(res.p(i, j)) <= inst.dc(i, j));
      if (s[i] == none || s[i] != s[j]) CHECK(res.p(i, j).is_zero());
    }
  }
  const State state(inst, s, res.prices);
  const auto cert = is_stable(inst, state, res.payments);
  CHECK(cert.stable);
  CHECK(cert.budget_balanced);
  CHECK(literal_stability(inst, state, res.payments).stable);
}

}  // namespace

TEST_CASE("direct payment examples") {
  const auto t1 = direct_payment_scheme(test::t1(), {f1, f1});
  CHECK(t1.balanced);
  CHECK(t1.payments[0] == r(0));
  CHECK(t1.payments[1] == r(1, 2));
  CHECK(t1.payments.total() == r(1, 2));
  CHECK(t1.prices.isZero());

  const auto t2 = direct_payment_scheme(test::t2(), {f1, f1});
  CHECK(t2.payments.total() == r(0));
  CHECK(t2.prices.isZero());

  const auto lone = make_instance({{0}}, {{0}}, {2});
  CHECK(brute_force_optimum(lone).assignment == Assignment{none});
  const auto empty = direct_payment_scheme(lone, {none});
  CHECK(empty.balanced);
  CHECK(empty.payments.total() == r(0));
}

TEST_CASE("direct payments flag non-optimal inputs") {
  const auto lone = make_instance({{0}}, {{0}}, {2});
  const auto res = direct_payment_scheme(lone, {f1});
  CHECK_FALSE(res.balanced);
  CHECK(res.unfunded == std::vector<int>{f1});
}

TEST_CASE("tradeoff examples") {
  const auto t1 = tradeoff_check(test::t1());
  CHECK(t1.delta == r(1, 2));
  CHECK(t1.ratio == r(1, 3));
  CHECK(t1.bound == r(7, 15));
  CHECK(t1.holds);
  CHECK_FALSE(t1.skipped);

  const auto t2 = tradeoff_check(test::t2());
  CHECK(t2.skipped);
  CHECK(t2.holds);
  CHECK(t2.bound == r(3, 5));
}

TEST_CASE("witness examples") {
  const auto t1 = witness_states(test::t1(), {f1, f1});
  CHECK(t1.b == std::vector<Strategy>{f1, none});
  CHECK(t1.s0 == Assignment{f1, none});
  CHECK(t1.witness.has_value());

  const auto t2 = witness_states(test::t2(), {f1, f1});
  CHECK(t2.b == std::vector<Strategy>{f1, f1});
  CHECK(t2.s0 == Assignment{f1, f1});
  CHECK(t2.s1 == Assignment{f1, f1});
  CHECK(t2.s2 == Assignment{f1, f1});
}

TEST_CASE("swapping agents land in different parts") {
  // Agents 1 and 2 each want the other's facility, where their heavy
  // neighbor (agent 4, resp. 3) sits. Agents 3 and 4 stay.
  const auto inst = make_instance({{5, 0}, {0, 5}, {0, 20}, {20, 0}},
                                  {{0, 0, 0, 10}, {0, 0, 10, 0}, {0, 10, 0, 0}, {10, 0, 0, 0}},
                                  {0, 0});
  const Assignment s{f1, 1, f1, 1};
  const auto w = witness_states(inst, s);
  CHECK(w.b == std::vector<Strategy>{1, f1, f1, 1});
  CHECK(parts_are_swap_free(w, s));
  CHECK(w.part1 == std::vector<int>{0, 2, 3});
  CHECK(w.part2 == std::vector<int>{1});
  CHECK(w.s1 == Assignment{1, 1, f1, 1});
  CHECK(w.s2 == Assignment{f1, f1, f1, 1});
}

TEST_CASE("moves onto and off a facility are separated") {
  // Agent 1 leaves f1 for the empty strategy while agent 2 joins f1.
  const auto inst = make_instance({{5}, {0}, {0}}, {{0, 0, 0}, {0, 0, 4}, {0, 4, 0}}, {0});
  const Assignment s{f1, none, f1};
  const auto w = witness_states(inst, s);
  CHECK(w.b == std::vector<Strategy>{none, f1, f1});
  CHECK(w.part1 == std::vector<int>{1, 2});
  CHECK(w.part2 == std::vector<int>{0});
  CHECK(parts_are_swap_free(w, s));
}

TEST_CASE("circulation examples") {
  const auto t1 = build_circulation(test::t1(), {f1, f1}, f1);
  CHECK(t1.agents == std::vector<int>{0, 1});
  CHECK(t1.network.supply(0) == r(1));
  CHECK(t1.network.supply(1) == r(-1, 2));
  CHECK(t1.network.supply(t1.facility_node) == r(0));
  CHECK(t1.network.supply(t1.z_node) == r(-1, 2));
  CHECK(*t1.network.arcs()[t1.arc_between[0][1]].capacity == r(1));
  CHECK(*t1.network.arcs()[t1.arc_between[1][0]].capacity == r(1));

  // Each T2 agent would lose dc = 1 by leaving, so Q = 1 and z absorbs 2.
  const auto t2 = build_circulation(test::t2(), {f1, f1}, f1);
  CHECK(t2.network.supply(0) == r(1));
  CHECK(t2.network.supply(1) == r(1));
  CHECK(t2.network.supply(t2.z_node) == r(-2));

  const auto single = build_circulation(test::t1(), {f1, none}, f1);
  CHECK(single.agents == std::vector<int>{0});
  CHECK(single.network.arcs().size() == 2);  // user -> facility -> z

  CHECK_THROWS_AS(build_circulation(test::t1(), {none, none}, f1), InvalidInput);
}

TEST_CASE("peering examples") {
  const auto inst = test::t1();
  const auto t1 = peering_payments(inst, {f1, f1});
  check_peering(inst, {f1, f1}, t1);
  CHECK(t1.p(0, 1) == r(1, 2));
  CHECK(t1.payments[1] == r(1, 2));

  const auto t2 = peering_payments(test::t2(), {f1, f1});
  check_peering(test::t2(), {f1, f1}, t2);
  CHECK(t2.p.isZero());

  const auto bad = peering_payments(inst, {none, f1});
  if (bad.feasible) {
    CHECK_FALSE(is_stable(inst, State(inst, {none, f1}, bad.prices), bad.payments).stable);
  } else {
    CHECK(social_cost(inst, bad.refutation) < social_cost(inst, {none, f1}));
  }
}

TEST_CASE("doubled weight examples") {
  const auto t1 = doubled_weights(test::t1(), {f1, f1});
  CHECK(t1.instance.dc(0, 1) == r(3, 2));
  CHECK(t1.instance.dc(1, 0) == r(3, 2));
  CHECK(q_value(t1.instance, {f1, f1}, 1) == ExtRat(r(0)));
  CHECK(is_stable(t1.instance, State(t1.instance, {f1, f1}, t1.prices)).stable);

  const auto t2 = doubled_weights(test::t2(), {f1, f1});
  CHECK(t2.instance.disconnection_costs() == test::t2().disconnection_costs());

  const auto lone = make_instance({{0}}, {{0}}, {2});
  CHECK_THROWS_AS(doubled_weights(lone, {f1}), InvalidInput);
}

TEST_CASE("payments at random optima") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 150; ++t) {
    const auto inst = sample(rng);
    const auto s = brute_force_optimum(inst).assignment;
    const auto q = q_values(inst, s);

    const auto direct = direct_payment_scheme(inst, s);
    CHECK(direct.balanced);
    const State dstate(inst, s, direct.prices);
    CHECK(is_stable(inst, dstate, direct.payments).stable);
    for (int i = 0; i < inst.agents(); ++i) {
      CHECK(direct.payments[i] >= r(0));
      if (q[i].is_finite()) CHECK((direct.payments[i] * q[i].value()) <= r(0));
    }
    CHECK(minimum_total_payment(inst, s) == direct.payments.total());

    const auto peering = peering_payments(inst, s);
    check_peering(inst, s, peering);

    const auto doubled = doubled_weights(inst, s);
    for (int i = 0; i < inst.agents(); ++i) {
      for (int j = 0; j < inst.agents(); ++j) {
        CHECK(doubled.instance.dc(i, j) <= r(2) * inst.dc(i, j));
      }
    }
    CHECK(is_stable(doubled.instance, State(doubled.instance, s, doubled.prices)).stable);

    const auto trade = tradeoff_check(inst);
    CHECK(trade.holds);
    const auto w = witness_states(inst, s);
    CHECK(parts_are_swap_free(w, s));
    CHECK(w.witness.has_value());
  }
}

TEST_CASE("infeasible circulations refute non-optimal assignments") {
  std::mt19937_64 rng(103);
  int refuted = 0;
  for (int t = 0; t < 300; ++t) {
    const auto inst = sample(rng, 5);
    Assignment s(inst.agents());
    std::uniform_int_distribution<int> pick(-1, inst.facilities() - 1);
    for (auto& x : s) x = pick(rng);
    const auto res = peering_payments(inst, s);
    if (res.feasible) {
      // Away from the optimum only facility users are covered by the
      // circulations; an agent at the empty strategy may still want to move.
      const State state(inst, s, res.prices);
      const auto cert = is_stable(inst, state, res.payments);
      CHECK(cert.budget_balanced);
      for (int i = 0; i < inst.agents(); ++i) {
        if (s[i] != none) CHECK(cert.agent_stable[i]);
      }
      continue;
    }
    ++refuted;
    CHECK(!res.violating_agents.empty());
    CHECK(social_cost(inst, res.refutation) < social_cost(inst, s));
  }
  CHECK(refuted > 30);
}
