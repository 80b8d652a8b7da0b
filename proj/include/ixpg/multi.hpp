#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ixpg/game.hpp"
#include "ixpg/oracle.hpp"

namespace ixpg {

/// Facilities used by one agent: bit k set iff facility k is used.
using FacilitySet = std::uint32_t;
using MultiAssignment = std::vector<FacilitySet>;

/// Beyond this many facilities the 2^m strategy enumeration is refused.
inline constexpr int kMaxMultiFacilities = 12;

/// Throws SizeCapExceeded when m > kMaxMultiFacilities.
void require_multi_enumerable(const Instance& inst);

/// Throws InvalidInput unless `s` has one set per agent, within range.
void validate(const Instance& inst, const MultiAssignment& s);

/// Embeds a single-facility assignment ({f_k} or the empty set).
MultiAssignment to_multi(const Assignment& s);

/// "{f1,f3}", "{}".
std::string set_name(FacilitySet set);

std::vector<bool> open_facilities(const Instance& inst, const MultiAssignment& s);

/// Agents whose set contains `facility`, in index order.
std::vector<int> users(const MultiAssignment& s, int facility);

/// Sum of cc over s_i plus dc to every agent sharing no facility with i.
Rat tc_multi(const Instance& inst, const MultiAssignment& s, int agent);
Rat tc_multi_if(const Instance& inst, const MultiAssignment& s, int agent, FacilitySet alt);

/// Open facility costs + connection costs + 2 dc over unordered pairs that
/// share no facility.
Rat social_cost_multi(const Instance& inst, const MultiAssignment& s);

/// Same variants as the single-facility potential, over set strategies.
Rat potential_multi(const Instance& inst, const MultiAssignment& s, PotentialKind kind,
                    const Rat& alpha = 1);

/// Every s_i' with |s_i \ s_i'| <= 1, s_i itself included, in increasing
/// bitmask order.
std::vector<FacilitySet> valid_deviations(const Instance& inst, const MultiAssignment& s, int agent);

/// Set order used for tie-breaking: fewer facilities first, then the set
/// whose lowest differing facility it contains.
bool set_precedes(FacilitySet a, FacilitySet b);

/// Best tc (alpha-modified when alpha != 1) over sets that keep s_i minus
/// f_k, omit f_k and contain no facility closed in s. Throws InvalidInput
/// when the agent does not use `facility`.
FacilitySet next_best_response_multi(const Instance& inst, const MultiAssignment& s, int agent,
                                     int facility, const Rat& alpha = 1);

/// Q_i(s, f_k) = tc at nBR_i(s, f_k) minus tc_i(s).
Rat q_value_multi(const Instance& inst, const MultiAssignment& s, int agent, int facility,
                  const Rat& alpha = 1);

/// Set assignment with per-facility prices; gamma_i(f_k) > 0 only if f_k is in s_i.
class MultiState {
 public:
  MultiState(const Instance& inst, MultiAssignment s, PricingStrategy prices);
  MultiState(const Instance& inst, MultiAssignment s);

  const MultiAssignment& assignment() const { return s_; }
  const PricingStrategy& prices() const { return prices_; }

 private:
  MultiAssignment s_;
  PricingStrategy prices_;
};

/// Per-agent, per-facility payments Delta_i(f_k), received for staying at f_k.
using MultiPayments = RatMatrix;

struct MultiStabilityCertificate {
  bool budget_balanced = false;
  /// Both sufficient conditions hold: no superset of s_i lowers tc, and
  /// gamma_i(f_k) - Delta_i(f_k) <= Q_i(s, f_k) for every used f_k.
  std::vector<bool> sufficient;
  /// No valid deviation is profitable, found by enumerating them all.
  std::vector<bool> literal;
  /// Budget balanced and every agent literally stable.
  bool stable = false;
  std::vector<std::string> violations;
};

MultiStabilityCertificate is_stable_multi(const Instance& inst, const MultiState& state);
MultiStabilityCertificate is_stable_multi(const Instance& inst, const MultiState& state,
                                          const MultiPayments& payments);

struct MultiTraceStep {
  enum class Kind { improve, close };

  Kind kind = Kind::improve;
  int agent = -1;
  FacilitySet from = 0;
  FacilitySet to = 0;
  int facility = -1;
  std::vector<int> moved;
  std::vector<FacilitySet> targets;
  Rat potential;
};

struct MultiStabilizationTrace {
  Rat initial_potential;
  std::vector<MultiTraceStep> steps;

  bool strictly_decreasing() const;
};

struct MultiStabilizationResult {
  MultiState state;
  MultiStabilizationTrace trace;
};

/// The coalitional procedure over set strategies: (A) the lowest-index agent
/// with a strictly tc-improving valid deviation avoiding closed facilities
/// takes its best one; (B) the lowest-index open facility with
/// c(f_k) > sum of Q_i(s, f_k) closes and its users move to nBR_i(s, f_k).
/// Quiescent prices are the Q-values scaled per facility to budget balance.
/// The default start is every agent using nothing.
MultiStabilizationResult stabilize_multi(const Instance& inst,
                                         std::optional<MultiAssignment> start = {},
                                         const Rat& alpha = 1);

struct MultiPeeringResult {
  bool feasible = false;
  /// p[k](i, j): what i pays j for staying together at facility k.
  std::vector<RatMatrix> p;
  PricingStrategy prices;
  /// Delta_i(f_k) = sum_j p[k](j, i).
  MultiPayments payments;

  int failed_facility = -1;
  std::vector<int> violating_agents;
  /// Violating agents moved to nBR_i(s*, f_k) of the failed facility.
  MultiAssignment refutation;
};

/// One circulation per open facility with user supplies Q_i(s*, f_k).
MultiPeeringResult peering_payments_multi(const Instance& inst, const MultiAssignment& s_star);

struct MultiOptimum {
  MultiAssignment assignment;
  Rat cost;
};

/// 2^(n m), saturating at kEnumerationCap + 1.
std::uint64_t multi_assignment_count(const Instance& inst);

/// Exact multi-facility optimum; ties go to the lexicographically smallest
/// assignment in bitmask order. Throws SizeCapExceeded beyond the cap.
MultiOptimum brute_force_optimum_multi(const Instance& inst);

}  // namespace ixpg
