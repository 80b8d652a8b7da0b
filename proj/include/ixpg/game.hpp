#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ixpg/instance.hpp"

namespace ixpg {

/// Cost of `agent` without its facility price:
/// cc(i, s_i) + sum of dc(i, j) over agents j with s_j != s_i.
/// Two agents that both use no facility count as disconnected.
Rat tc(const Instance& inst, const Assignment& s, int agent);

/// tc of `agent` after it unilaterally switches to `alt`.
Rat tc_if(const Instance& inst, const Assignment& s, int agent, Strategy alt);

/// Modified cost cc(i, s_i) + alpha * (disconnection part of tc) for every
/// strategy of `agent` with the others fixed. Entry 0 is the empty strategy,
/// entry k + 1 is facility k. alpha = 1 gives tc.
std::vector<Rat> strategy_costs(const Instance& inst, const Assignment& s, int agent,
                                const Rat& alpha = 1);

/// tc_i + gamma_i(s_i) - Delta_i.
Rat rc(const Instance& inst, const State& state, int agent);
Rat rc(const Instance& inst, const State& state, const PaymentVector& payments, int agent);

/// Open facility costs + connection costs + 2 * dc over disconnected unordered pairs.
Rat social_cost(const Instance& inst, const Assignment& s);

enum class PotentialKind { tilde, full, alpha };

/// tilde: sum cc + sum of dc over disconnected pairs (exact potential of tc).
/// full:  tilde + open facility costs.
/// alpha: sum cc + alpha * disconnected dc + open facility costs; alpha in [1, 2].
Rat potential(const Instance& inst, const Assignment& s, PotentialKind kind, const Rat& alpha = 1);

/// Throws InvalidInput unless 1 <= alpha <= 2.
void require_alpha_range(const Rat& alpha);

/// Best strategy other than s_i. A facility closed in s is only a candidate
/// for an agent at the empty strategy, since otherwise the empty strategy is
/// at least as good. Ties prefer the empty strategy, then the lowest index.
/// Returns nullopt only when the agent has no alternative (m = 0).
/// With alpha != 1 the comparison uses the alpha-modified cost.
std::optional<Strategy> next_best_response(const Instance& inst, const Assignment& s, int agent,
                                           const Rat& alpha = 1);

/// Q_i(s) = cost at the next best response minus current cost (alpha-modified
/// when alpha != 1). Infinite when no alternative exists.
ExtRat q_value(const Instance& inst, const Assignment& s, int agent, const Rat& alpha = 1);

/// All Q-values of an assignment at once (O(n^2 + n m)).
std::vector<ExtRat> q_values(const Instance& inst, const Assignment& s, const Rat& alpha = 1);

struct StabilityCertificate {
  bool budget_balanced = false;
  std::vector<bool> agent_stable;
  bool stable = false;
  /// Human-readable reasons, e.g. "agent 2 unstable", "f1 not budget balanced".
  std::vector<std::string> violations;
};

/// Sum over users of gamma_i(f_k) equals c(f_k) for every facility (closed
/// facilities need a zero sum, which the price support rule guarantees).
bool is_budget_balanced(const Instance& inst, const State& state);

/// Exact stability test: agent i is stable iff gamma_i(s_i) - Delta_i <= Q_i(s).
StabilityCertificate is_stable(const Instance& inst, const State& state);
StabilityCertificate is_stable(const Instance& inst, const State& state,
                               const PaymentVector& payments);

/// Builds a certificate from per-agent verdicts, adding the budget balance
/// check and the violation messages.
StabilityCertificate certify(const Instance& inst, const State& state,
                             std::vector<bool> agent_stable);

/// Budget balanced and rc_i <= alpha * tc_i(s_i', s_-i) for every alternative s_i'.
StabilityCertificate is_alpha_stable(const Instance& inst, const State& state, const Rat& alpha);

}  // namespace ixpg
