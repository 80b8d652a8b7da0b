#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ixpg/errors.hpp"
#include "ixpg/io.hpp"

using namespace ixpg;
using ixpg::test::r;

TEST_CASE("rationals travel as exact strings") {
  CHECK(to_json(r(-1, 2)) == "-1/2");
  CHECK(rat_from_json(json("3/6")) == r(1, 2));
  CHECK(rat_from_json(json(4)) == r(4));
  CHECK_THROWS_AS(rat_from_json(json(0.5)), InvalidInput);
  CHECK_THROWS_AS(rat_from_json(json(nullptr)), InvalidInput);
}

TEST_CASE("instances round-trip") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    GeneratorParams p;
    p.agents = 1 + t % 5;
    p.facilities = 1 + t % 3;
    const auto inst = random_instance(p, rng);
    const auto back = instance_from_json(json::parse(to_json(inst).dump()));
    CHECK(hash_hex(back) == hash_hex(inst));
    CHECK(back.disconnection_costs() == inst.disconnection_costs());
  }
  CHECK_THROWS_AS(instance_from_json(json{{"cc", {{0}}}}), InvalidInput);
}

TEST_CASE("assignments and peer payments round-trip") {
  const Assignment s{0, kNoFacility, 2};
  CHECK(to_json(s).dump() == "[0,null,2]");
  CHECK(assignment_from_json(to_json(s)) == s);
  const MultiAssignment ms{0b101, 0, 0b010};
  CHECK(multi_to_json(ms).dump() == "[[0,2],[],[1]]");
  CHECK(multi_assignment_from_json(multi_to_json(ms)) == ms);

  RatMatrix p = RatMatrix::Constant(3, 3, Rat());
  p(0, 2) = r(1, 3);
  p(2, 0) = r(-1, 3);
  CHECK(peer_payments_json(p).size() == 1);
  CHECK(peer_payments_from_json(peer_payments_json(p), 3) == p);
}
