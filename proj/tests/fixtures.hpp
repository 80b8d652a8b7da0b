#pragma once

#include "ixpg/generate.hpp"

namespace ixpg::test {

// T1: the price-of-stability example with eps = 1/2.
inline Instance t1() { return pos_fixture(Rat(1, 2)); }

// T2: the price-of-anarchy example.
inline Instance t2() { return poa_fixture(); }

// M1: two agents, two free facilities, dc = 3.
inline Instance m1() { return make_instance({{0, 1}, {2, 0}}, {{0, 3}, {3, 0}}, {0, 0}); }

inline Rat r(long p, long q = 1) { return Rat(p, q); }

}  // namespace ixpg::test
