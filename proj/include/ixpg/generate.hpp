#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ixpg/instance.hpp"

namespace ixpg {

/// Integer costs drawn uniformly from closed ranges. A pair of agents gets a
/// nonzero disconnection cost with probability `density`.
struct GeneratorParams {
  int agents = 4;
  int facilities = 2;
  int cc_min = 0;
  int cc_max = 10;
  int dc_min = 0;
  int dc_max = 10;
  int fcost_min = 0;
  int fcost_max = 10;
  double density = 1.0;
  std::uint64_t seed = 0;
};

/// Throws InvalidInput for empty or inverted ranges, negative costs or a
/// density outside [0, 1].
Instance random_instance(const GeneratorParams& params);
Instance random_instance(const GeneratorParams& params, std::mt19937_64& rng);

/// Two agents, one free facility, cc = (0, 1 + eps), dc(1, 2) = 1. The only
/// stable states leave both agents disconnected, so PoS = 2 / (1 + eps).
Instance pos_fixture(const Rat& eps);

/// Two agents, one free facility, zero connection costs, dc(1, 2) = 1. The
/// all-empty assignment is stable with cost 2 against an optimum of 0.
Instance poa_fixture();

/// Convenience constructor from nested rows.
Instance make_instance(const std::vector<std::vector<Rat>>& cc,
                       const std::vector<std::vector<Rat>>& dc, const std::vector<Rat>& fcost);

}  // namespace ixpg
