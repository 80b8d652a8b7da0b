#pragma once

#include <optional>
#include <vector>

#include "ixpg/game.hpp"

namespace ixpg {

/// Best response under zero anticipated price: staying costs tc + gamma_i(s_i),
/// any other strategy costs its tc alone. Ties prefer staying, then the empty
/// strategy, then the lowest facility index.
Strategy best_response(const Instance& inst, const State& state, int agent);

struct TraceStep {
  enum class Kind { improve, close };

  Kind kind = Kind::improve;
  // improve: one agent moves.
  int agent = -1;
  Strategy from = kNoFacility;
  Strategy to = kNoFacility;
  // close: a facility shuts and every user moves to its next best response.
  int facility = -1;
  std::vector<int> moved;
  std::vector<Strategy> targets;  // new strategy of each moved agent
  /// Potential after the step.
  Rat potential;
};

struct StabilizationTrace {
  Rat initial_potential;
  std::vector<TraceStep> steps;

  /// True iff the potential strictly decreases at every step.
  bool strictly_decreasing() const;
};

struct StabilizationResult {
  State state;
  StabilizationTrace trace;
};

/// Coalitional stabilization. Alternates (A) single-agent moves that strictly
/// lower tc without entering a closed facility, lowest agent first, and (B)
/// closing the lowest-index open facility whose cost exceeds the summed
/// Q-values of its users, moving them all to their next best responses. At
/// quiescence every user of an open facility is charged its Q-value, scaled
/// down per facility to exact budget balance.
///
/// Without a start the all-empty assignment is used; the factor-2 cost
/// guarantee holds when starting from a social optimum.
StabilizationResult stabilize(const Instance& inst, std::optional<Assignment> start = {});

/// The same procedure on the cost cc + alpha * (disconnection part), giving an
/// alpha-approximately stable state; from an optimum its cost is at most
/// 2 / alpha times optimal. Requires 1 <= alpha <= 2.
StabilizationResult stabilize_alpha(const Instance& inst, const Rat& alpha,
                                    std::optional<Assignment> start = {});

/// Prices gamma_i(s_i) = Q_i(s) for users of open facilities, scaled per
/// facility by c(f_k) / sum Q. Returns nullopt when some open facility has
/// sum Q < c(f_k) or some user has a negative Q.
std::optional<PricingStrategy> q_prices(const Instance& inst, const Assignment& s,
                                        const Rat& alpha = 1);

}  // namespace ixpg
