#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ixpg/errors.hpp"
#include "ixpg/game.hpp"
#include "ixpg/oracle.hpp"

using namespace ixpg;
using ixpg::test::r;

namespace {

constexpr Strategy f1 = 0;
constexpr Strategy none = kNoFacility;

PricingStrategy price(const Instance& inst, int agent, int facility, const Rat& v) {
  PricingStrategy p = zero_prices(inst);
  p(agent, facility) = v;
  return p;
}

PaymentVector pay(int n, int agent, const Rat& v) {
  PaymentVector d = PaymentVector::zeros(n);
  d.delta(agent) = v;
  return d;
}

// Small random instances with sparse-ish, partly fractional costs.
Instance sample(std::mt19937_64& rng) {
  GeneratorParams p;
  p.agents = std::uniform_int_distribution<int>(1, 6)(rng);
  p.facilities = std::uniform_int_distribution<int>(1, 3)(rng);
  p.density = 0.7;
  return random_instance(p, rng);
}

Assignment random_assignment(const Instance& inst, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(-1, inst.facilities() - 1);
  Assignment s(inst.agents());
  for (auto& x : s) x = pick(rng);
  return s;
}

}  // namespace

TEST_CASE("tc examples") {
  CHECK(tc(test::t2(), {none, none}, 0) == r(1));
  CHECK(tc(test::t1(), {f1, f1}, 0) == r(0));
  CHECK(tc(test::t1(), {f1, f1}, 1) == r(3, 2));
}

TEST_CASE("rc examples") {
  const auto inst = test::t1();
  CHECK(rc(inst, State(inst, {f1, f1}), 1) == r(3, 2));
  CHECK(rc(inst, State(inst, {f1, f1}, price(inst, 1, 0, r(1, 4))), 1) == r(7, 4));
  CHECK(rc(inst, State(inst, {f1, f1}), pay(2, 1, r(1, 2)), 1) == r(1));
}

TEST_CASE("social cost examples") {
  CHECK(social_cost(test::t2(), {none, none}) == r(2));
  CHECK(social_cost(test::t2(), {f1, f1}) == r(0));
  CHECK(social_cost(test::t1(), {f1, f1}) == r(3, 2));
  // Opening cost is paid once per open facility.
  const auto inst = make_instance({{1}, {1}}, {{0, 0}, {0, 0}}, {5});
  CHECK(social_cost(inst, {f1, f1}) == r(7));
  CHECK(social_cost(inst, {none, none}) == r(0));
}

TEST_CASE("potential examples") {
  const auto inst = test::t1();
  CHECK(potential(inst, {f1, f1}, PotentialKind::tilde) == r(3, 2));
  CHECK(potential(inst, {f1, f1}, PotentialKind::full) == r(3, 2));
  CHECK(potential(inst, {f1, f1}, PotentialKind::alpha, r(2)) == r(3, 2));
  CHECK(potential(inst, {none, none}, PotentialKind::alpha, r(3, 2)) == r(3, 2));
  CHECK_THROWS_AS(potential(inst, {f1, f1}, PotentialKind::alpha, r(3)), InvalidInput);
  CHECK_THROWS_AS(potential(inst, {f1, f1}, PotentialKind::alpha, r(1, 2)), InvalidInput);
}

TEST_CASE("next best response examples") {
  CHECK(next_best_response(test::t1(), {f1, f1}, 1) == none);
  CHECK(next_best_response(test::t2(), {none, none}, 0) == f1);
  const auto single = make_instance({{5, 7}}, {{0}}, {0, 0});
  CHECK(next_best_response(single, {f1}, 0) == none);
  // With s_i empty the candidates are the open facilities.
  const auto two = make_instance({{3, 1}, {0, 0}}, {{0, 2}, {2, 0}}, {0, 0});
  CHECK(next_best_response(two, {none, 1}, 0) == 1);
  CHECK(next_best_response(two, {none, f1}, 0) == f1);
}

TEST_CASE("q-value examples") {
  CHECK(q_value(test::t1(), {f1, f1}, 0) == ExtRat(r(1)));
  CHECK(q_value(test::t1(), {f1, f1}, 1) == ExtRat(r(-1, 2)));
  CHECK(q_value(test::t2(), {none, none}, 0) == ExtRat(r(0)));
  CHECK(q_value(test::t2(), {f1, none}, 1) == ExtRat(r(-1)));
}

TEST_CASE("is_stable examples") {
  const auto inst1 = test::t1();
  const auto inst2 = test::t2();
  CHECK(is_stable(inst2, State(inst2, {none, none})).stable);
  const auto cert = is_stable(inst1, State(inst1, {f1, f1}));
  CHECK_FALSE(cert.stable);
  CHECK(cert.agent_stable[0]);
  CHECK_FALSE(cert.agent_stable[1]);
  REQUIRE(cert.violations.size() == 1);
  CHECK(cert.violations[0] == "agent 2 unstable");
  CHECK(is_stable(inst1, State(inst1, {f1, f1}), pay(2, 1, r(1, 2))).stable);
}

TEST_CASE("budget balance is reported per facility") {
  const auto inst = make_instance({{0}, {0}}, {{0, 4}, {4, 0}}, {3});
  State underpaid(inst, {f1, f1}, price(inst, 0, 0, r(1)));
  const auto cert = is_stable(inst, underpaid);
  CHECK_FALSE(cert.budget_balanced);
  CHECK(cert.violations.front() == "f1 not budget balanced (collects 1, costs 3)");
  auto prices = price(inst, 0, 0, r(1));
  prices(1, 0) = r(2);
  CHECK(is_stable(inst, State(inst, {f1, f1}, prices)).stable);
}

TEST_CASE("price support is enforced") {
  const auto inst = test::t1();
  CHECK_THROWS_AS(State(inst, {none, f1}, price(inst, 0, 0, r(1))), InvalidInput);
  CHECK_THROWS_AS(State(inst, {f1, f1}, price(inst, 0, 0, r(-1))), InvalidInput);
  CHECK_THROWS_AS(validate(inst, {f1, 1}), InvalidInput);
  CHECK_THROWS_AS(validate(inst, {f1}), InvalidInput);
}

TEST_CASE("is_alpha_stable examples") {
  const auto inst = test::t1();
  CHECK(is_alpha_stable(inst, State(inst, {f1, f1}), r(2)).stable);
  CHECK_FALSE(is_alpha_stable(inst, State(inst, {f1, f1}), r(1)).stable);
  CHECK(is_alpha_stable(test::t2(), State(test::t2(), {none, none}), r(1)).stable);
  CHECK_THROWS_AS(is_alpha_stable(inst, State(inst, {f1, f1}), r(1, 2)), InvalidInput);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(make_instance({{0}}, {{1}}, {0}), InvalidInput);
  CHECK_THROWS_AS(make_instance({{0}, {0}}, {{0, 1}, {2, 0}}, {0}), InvalidInput);
  CHECK_THROWS_AS(make_instance({{-1}}, {{0}}, {0}), InvalidInput);
  CHECK_THROWS_AS(make_instance({{0}}, {{0}}, {0, 1}), InvalidInput);
}

TEST_CASE("instance hash ignores spelling") {
  const auto a = make_instance({{0}, {Rat::parse("1.5")}}, {{0, 1}, {1, 0}}, {0});
  CHECK(instance_hash(a) == instance_hash(test::t1()));
  CHECK(instance_hash(test::t1()) != instance_hash(test::t2()));
}

TEST_CASE("exact potential on random moves") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const auto inst = sample(rng);
    const auto s = random_assignment(inst, rng);
    const Rat base = potential(inst, s, PotentialKind::tilde);
    for (int i = 0; i < inst.agents(); ++i) {
      for (Strategy x = none; x < inst.facilities(); ++x) {
        Assignment moved = s;
        moved[i] = x;
        CHECK(tc(inst, moved, i) - tc(inst, s, i) ==
              potential(inst, moved, PotentialKind::tilde) - base);
      }
    }
  }
}

TEST_CASE("potential brackets social cost") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto inst = sample(rng);
    const auto s = random_assignment(inst, rng);
    const Rat phi = potential(inst, s, PotentialKind::full);
    const Rat cost = social_cost(inst, s);
    CHECK(phi <= cost);
    CHECK(cost <= Rat(2) * phi);
  }
}

TEST_CASE("Q is infinite only without facilities") {
  RatMatrix cc(1, 0);
  RatMatrix dc = RatMatrix::Constant(1, 1, Rat());
  const Instance bare(cc, dc, RatVector(0));
  CHECK(q_value(bare, {none}, 0).is_infinite());
  CHECK(next_best_response(bare, {none}, 0) == std::nullopt);
}

TEST_CASE("nonnegative Q iff no improving move avoiding closed facilities") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 300; ++t) {
    const auto inst = sample(rng);
    const auto s = random_assignment(inst, rng);
    const auto open = open_facilities(inst, s);
    const auto q = q_values(inst, s);
    for (int i = 0; i < inst.agents(); ++i) {
      CHECK(q[i] == q_value(inst, s, i));
      bool improving = false;
      for (Strategy x = none; x < inst.facilities(); ++x) {
        if (x == s[i] || (x != none && !open[x])) continue;
        if (tc_if(inst, s, i, x) < tc(inst, s, i)) improving = true;
      }
      CHECK((q[i] >= ExtRat(0)) == !improving);
    }
  }
}

TEST_CASE("Q-value criterion agrees with the literal deviation scan") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto inst = sample(rng);
    const auto s = random_assignment(inst, rng);
    // Random prices on used facilities, sometimes with coordinator payments.
    PricingStrategy prices = zero_prices(inst);
    PaymentVector payments = PaymentVector::zeros(inst.agents());
    std::uniform_int_distribution<int> amount(0, 6);
    for (int i = 0; i < inst.agents(); ++i) {
      if (s[i] != none) prices(i, s[i]) = Rat(amount(rng), 2);
      if (t % 2) payments.delta(i) = Rat(amount(rng), 3);
    }
    const State state(inst, s, prices);
    const auto fast = is_stable(inst, state, payments);
    const auto literal = literal_stability(inst, state, payments);
    CHECK(fast.agent_stable == literal.agent_stable);
    CHECK(fast.stable == literal.stable);
  }
}
