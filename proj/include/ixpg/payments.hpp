#pragma once

#include <optional>
#include <vector>

#include "ixpg/flow.hpp"
#include "ixpg/game.hpp"
#include "ixpg/oracle.hpp"

namespace ixpg {

/// Coordinator payments that stabilize an optimal assignment.
struct DirectScheme {
  PricingStrategy prices;
  PaymentVector payments;
  /// False when some open facility cannot be funded from non-negative
  /// Q-values; this never happens at a true optimum.
  bool balanced = false;
  std::vector<int> unfunded;
};

/// Agents with Q_i < 0 are paid -Q_i and charged nothing; the rest are
/// charged Q_i, scaled down per facility to exact budget balance.
DirectScheme direct_payment_scheme(const Instance& inst, const Assignment& s_star);

/// Smallest total coordinator payment that makes `s` stable with budget
/// balanced prices: sum of max(0, -Q_i) plus, per open facility, whatever
/// the non-negative Q-values of its users leave uncovered.
Rat minimum_total_payment(const Instance& inst, const Assignment& s);

struct TradeoffReport {
  Optimum optimum;
  Rat delta;
  Ratio pos;
  /// delta / c(s*); empty when c(s*) = 0.
  std::optional<Rat> ratio;
  /// 1 - (2/5) PoS; empty when PoS is unbounded.
  std::optional<Rat> bound;
  bool skipped = false;
  bool holds = false;
};

/// Compares the coordinator payment at the oracle optimum with the price of
/// stability. Skipped (and trivially holding) when the optimum costs 0.
/// Throws SizeCapExceeded for instances beyond the oracle.
TradeoffReport tradeoff_check(const Instance& inst);

struct WitnessStates {
  /// b_i: the best reply to s*_{-i} among the empty strategy and facilities
  /// open in s*; ties prefer s*_i, then empty, then the lowest index.
  std::vector<Strategy> b;
  std::vector<int> part1;  // agents moving up, or not moving
  std::vector<int> part2;  // agents moving down
  Assignment s0;           // everyone plays b_i
  Assignment s1;           // only part1 moves
  Assignment s2;           // only part2 moves
  /// sum of tc_i(b_i, s*_{-i}).
  Rat best_reply_total;
  /// Index (0, 1, 2) of a state s with best_reply_total >= (4/5) tilde-potential(s).
  std::optional<int> witness;
};

/// Order: empty strategy below every facility, facilities by index. An agent
/// whose b_i ranks above s*_i joins part1, one ranking below joins part2, so
/// no two agents in a part swap places.
WitnessStates witness_states(const Instance& inst, const Assignment& s_star);

/// True when no two agents in the same part swap places.
bool parts_are_swap_free(const WitnessStates& w, const Assignment& s_star);

/// Per-facility circulation: one node per user with supply Q_i(s*), a
/// facility node with supply -c(f_k) and a node z absorbing the surplus.
/// Users are joined both ways with capacity dc(i, j); every user feeds the
/// facility node and the facility node feeds z, both uncapacitated.
struct CirculationNetwork {
  int facility = -1;
  std::vector<int> agents;  // node v < agents.size() is agent agents[v]
  int facility_node = -1;
  int z_node = -1;
  FlowNetwork<Rat> network;
  /// arc_between(u, v) is the arc index from user node u to user node v.
  std::vector<std::vector<int>> arc_between;
  std::vector<int> arc_to_facility;  // per user node
};

/// Throws InvalidInput unless `facility` is open in s_star.
CirculationNetwork build_circulation(const Instance& inst, const Assignment& s_star, int facility);

/// Builds the circulation for arbitrary user supplies; the single-facility
/// variant passes Q_i(s*), the multi-facility variant Q_i(s*, f_k).
CirculationNetwork make_circulation(const Instance& inst, int facility, std::vector<int> agents,
                                    const std::vector<Rat>& supplies);

struct CirculationFlows {
  bool feasible = false;
  /// Per user node pair (u, v): v_uv - v_vu.
  std::vector<std::vector<Rat>> net;
  /// Per user node: flow into the facility node.
  std::vector<Rat> to_facility;
  /// When infeasible: user nodes on the violated side of the cut.
  std::vector<int> violating_users;
};

CirculationFlows solve_circulation(const CirculationNetwork& circ);

struct PeeringResult {
  bool feasible = false;
  /// p(i, j): amount agent i pays agent j; antisymmetric.
  RatMatrix p;
  PricingStrategy prices;
  /// Delta_i = sum_j p(j, i).
  PaymentVector payments;
  /// Per pair, v_ij - v_ji from the circulation (same as p when feasible).
  RatMatrix net_flow;
  /// Raw facility-arc flows v_{i, f} before scaling.
  RatVector facility_flow;

  /// When infeasible: the first facility whose circulation failed, the
  /// agents on the violated side of the cut, and the assignment that moves
  /// them to their next best responses (strictly cheaper than s_star).
  int failed_facility = -1;
  std::vector<int> violating_agents;
  Assignment refutation;
};

/// Peer payments stabilizing s_star, from one circulation per open facility.
PeeringResult peering_payments(const Instance& inst, const Assignment& s_star);

struct DoubledWeights {
  Instance instance;
  PricingStrategy prices;
};

/// dc'(i, j) = dc(i, j) + |v_ij - v_ji| for users of the same facility, with
/// the peering prices. s_star is stable in the new instance with no
/// payments. Throws InvalidInput if the circulation is infeasible.
DoubledWeights doubled_weights(const Instance& inst, const Assignment& s_star);

}  // namespace ixpg
