#include <doctest.h>

#include <random>

#include "ixpg/rational.hpp"

using ixpg::ExtRat;
using ixpg::Rat;

TEST_CASE("rationals stay canonical") {
  CHECK(Rat(2, 4).str() == "1/2");
  CHECK(Rat(3, -6).str() == "-1/2");
  CHECK(Rat(4, 2).str() == "2");
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 3) * Rat(3) == Rat(1));
  CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
}

TEST_CASE("parsing accepts integers, fractions and decimals") {
  CHECK(Rat::parse("7") == Rat(7));
  CHECK(Rat::parse("-3/9") == Rat(-1, 3));
  CHECK(Rat::parse("1.25") == Rat(5, 4));
  CHECK(Rat::parse("-0.5") == Rat(-1, 2));
  CHECK(Rat::parse("0.1") == Rat(1, 10));
  CHECK_THROWS_AS(Rat::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse(""), std::invalid_argument);
}

TEST_CASE("serialization round-trips exactly") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 999983);
  for (int t = 0; t < 2000; ++t) {
    Rat x(num(rng), den(rng));
    x = x * x - Rat(num(rng), den(rng));
    CHECK(Rat::parse(x.str()) == x);
  }
}

TEST_CASE("extended rationals order infinity last") {
  CHECK(ExtRat(Rat(5)) < ExtRat::infinity());
  CHECK(!(ExtRat::infinity() < ExtRat(Rat(5))));
  CHECK(ExtRat::infinity() == ExtRat::infinity());
  CHECK((ExtRat(Rat(1)) + ExtRat::infinity()) == ExtRat::infinity());
  CHECK_THROWS(ExtRat::infinity().value());
}
