#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ixpg/game.hpp"

namespace ixpg {

/// Largest number of assignments any enumerator will visit.
inline constexpr std::uint64_t kEnumerationCap = 10'000'000;

/// A cost ratio against the optimum; unbounded when the optimum costs 0 and
/// the compared cost does not.
struct Ratio {
  std::optional<Rat> value;

  static Ratio of(const Rat& cost, const Rat& optimum);
  bool unbounded() const { return !value.has_value(); }
  std::string str() const;
};

struct Optimum {
  Assignment assignment;
  Rat cost;
};

struct StabilizableState {
  Assignment assignment;
  Rat cost;
  /// Witness prices: Q-values scaled per facility to budget balance.
  PricingStrategy prices;
};

struct OracleReport {
  Optimum optimum;
  /// In lexicographic order of assignments (empty strategy first).
  std::vector<StabilizableState> stabilizable;
  Ratio pos;
  Ratio poa;
};

/// (m + 1)^n, saturating at kEnumerationCap + 1.
std::uint64_t single_assignment_count(const Instance& inst);

/// Exact social optimum; ties go to the lexicographically smallest
/// assignment. Throws SizeCapExceeded beyond kEnumerationCap assignments.
Optimum brute_force_optimum(const Instance& inst);

/// All assignments that admit budget-balanced stabilizing prices without
/// payments: every Q_i >= 0 and every open facility has sum Q >= c(f_k).
std::vector<StabilizableState> enumerate_stabilizable(const Instance& inst);

/// Optimum, stabilizable states, PoS and PoA in one enumeration pass.
/// Memoized per instance for the lifetime of the process; thread safe.
std::shared_ptr<const OracleReport> oracle_report(const Instance& inst);

Ratio price_of_stability(const Instance& inst);
Ratio price_of_anarchy(const Instance& inst);

/// Stability by scanning every unilateral deviation: rc_i <= tc_i(x, s_-i)
/// for each agent and each strategy x != s_i, closed facilities included.
StabilityCertificate literal_stability(const Instance& inst, const State& state,
                                       const PaymentVector& payments);
StabilityCertificate literal_stability(const Instance& inst, const State& state);

/// Stabilizability decided by trying every price vertex: for each open
/// facility, each subset of its users pays its Q-value, the subset total is
/// scaled down to c(f_k), and the resulting state is checked literally.
/// Exponential in the number of users; intended for n <= 4.
bool stabilizable_by_price_vertices(const Instance& inst, const Assignment& s);

}  // namespace ixpg
