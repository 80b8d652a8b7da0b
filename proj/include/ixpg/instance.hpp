#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ixpg/rational.hpp"

namespace ixpg {

/// Index of a facility, or kNoFacility for the empty strategy.
using Strategy = int;
inline constexpr Strategy kNoFacility = -1;

/// One strategy per agent (single-facility mode).
using Assignment = std::vector<Strategy>;

/// A game instance: n agents, m facilities, connection costs cc (n x m),
/// symmetric disconnection costs dc (n x n, zero diagonal) and facility
/// opening costs (length m). All entries are non-negative.
class Instance {
 public:
  Instance() = default;
  /// Throws InvalidInput when the shapes disagree, an entry is negative,
  /// dc is not symmetric or has a nonzero diagonal.
  Instance(RatMatrix cc, RatMatrix dc, RatVector fcost);

  int agents() const { return static_cast<int>(cc_.rows()); }
  int facilities() const { return static_cast<int>(cc_.cols()); }

  const Rat& cc(int agent, int facility) const { return cc_(agent, facility); }
  const Rat& dc(int a, int b) const { return dc_(a, b); }
  const Rat& fcost(int facility) const { return fcost_(facility); }

  const RatMatrix& connection_costs() const { return cc_; }
  const RatMatrix& disconnection_costs() const { return dc_; }
  const RatVector& facility_costs() const { return fcost_; }

  /// Sum of dc(agent, j) over all j.
  const Rat& dc_total(int agent) const { return dc_row_sum_(agent); }

  /// Cost of connecting `agent` to `s` (zero for the empty strategy).
  Rat connection(int agent, Strategy s) const { return s == kNoFacility ? Rat() : cc_(agent, s); }

  bool all_facility_costs_zero() const;

 private:
  RatMatrix cc_;
  RatMatrix dc_;
  RatVector fcost_;
  RatVector dc_row_sum_;
};

/// Throws InvalidInput unless `s` has one valid strategy per agent.
void validate(const Instance& inst, const Assignment& s);

/// Facility k is open iff some agent uses it.
std::vector<bool> open_facilities(const Instance& inst, const Assignment& s);

/// Agents using facility k, in index order.
std::vector<int> users(const Assignment& s, int facility);

/// Per-agent, per-facility price shares gamma_i(f_k) >= 0.
using PricingStrategy = RatMatrix;

PricingStrategy zero_prices(const Instance& inst);

/// An assignment together with prices. The constructor enforces the price
/// support rule: gamma_i(f_k) > 0 only if agent i uses f_k.
class State {
 public:
  State(const Instance& inst, Assignment s, PricingStrategy prices);
  State(const Instance& inst, Assignment s);

  const Assignment& assignment() const { return s_; }
  const PricingStrategy& prices() const { return prices_; }
  Strategy strategy(int agent) const { return s_[agent]; }
  /// gamma_i(s_i); zero for the empty strategy.
  Rat price_paid(int agent) const;

 private:
  Assignment s_;
  PricingStrategy prices_;
};

/// Per-agent payments Delta_i. Coordinator payments are non-negative; peer
/// payments are net received amounts and may be negative.
struct PaymentVector {
  RatVector delta;

  static PaymentVector zeros(int agents);
  /// Net amounts received from an antisymmetric peer payment matrix where
  /// p(i, j) is what i pays j: Delta_i = sum_j p(j, i).
  static PaymentVector from_peer_payments(const RatMatrix& p);

  Rat total() const;
  const Rat& operator[](int agent) const { return delta(agent); }
};

/// 64-bit FNV-1a of the canonical text form of an instance. Equal instances
/// hash equally regardless of how their numbers were written.
std::uint64_t instance_hash(const Instance& inst);

/// "f1", "f2", ... for facilities and "none" for the empty strategy.
std::string strategy_name(Strategy s);

}  // namespace ixpg
