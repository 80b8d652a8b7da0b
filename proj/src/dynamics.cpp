#include "ixpg/dynamics.hpp"

namespace ixpg {

Strategy best_response(const Instance& inst, const State& state, int agent) {
  const auto& s = state.assignment();
  const auto costs = strategy_costs(inst, s, agent);
  const Strategy current = s[agent];
  Strategy best = current;
  Rat best_cost = costs[current + 1] + state.price_paid(agent);
  for (Strategy x = kNoFacility; x < inst.facilities(); ++x) {
    if (x != current && costs[x + 1] < best_cost) {
      best = x;
      best_cost = costs[x + 1];
    }
  }
  return best;
}

bool StabilizationTrace::strictly_decreasing() const {
  const Rat* prev = &initial_potential;
  for (const auto& step : steps) {
    if (!(step.potential < *prev)) return false;
    prev = &step.potential;
  }
  return true;
}

std::optional<PricingStrategy> q_prices(const Instance& inst, const Assignment& s,
                                        const Rat& alpha) {
  const auto q = q_values(inst, s, alpha);
  PricingStrategy prices = zero_prices(inst);
  for (int k = 0; k < inst.facilities(); ++k) {
    const auto members = users(s, k);
    if (members.empty()) continue;
    Rat total;
    for (int i : members) {
      // Users of a facility can always fall back to the empty strategy.
      const Rat& qi = q[i].value();
      if (qi.sign() < 0) return std::nullopt;
      total += qi;
    }
    if (total < inst.fcost(k)) return std::nullopt;
    if (total.is_zero()) continue;
    const Rat scale = inst.fcost(k) / total;
    for (int i : members) prices(i, k) = q[i].value() * scale;
  }
  return prices;
}

namespace {

// Lowest-cost strictly improving move for `agent` that avoids facilities
// closed in s. Ties prefer the empty strategy, then the lowest index.
std::optional<Strategy> improving_move(const Instance& inst, const Assignment& s,
                                       const std::vector<bool>& open, int agent,
                                       const Rat& alpha) {
  const auto costs = strategy_costs(inst, s, agent, alpha);
  const Strategy current = s[agent];
  std::optional<Strategy> best;
  const Rat* best_cost = &costs[current + 1];
  for (Strategy x = kNoFacility; x < inst.facilities(); ++x) {
    if (x == current || (x != kNoFacility && !open[x])) continue;
    if (costs[x + 1] < *best_cost) {
      best = x;
      best_cost = &costs[x + 1];
    }
  }
  return best;
}

Rat engine_potential(const Instance& inst, const Assignment& s, const Rat& alpha) {
  return potential(inst, s, PotentialKind::alpha, alpha);
}

}  // namespace

StabilizationResult stabilize_alpha(const Instance& inst, const Rat& alpha,
                                    std::optional<Assignment> start) {
  require_alpha_range(alpha);
  Assignment s = start ? std::move(*start) : Assignment(inst.agents(), kNoFacility);
  validate(inst, s);

  StabilizationTrace trace;
  trace.initial_potential = engine_potential(inst, s, alpha);

  while (true) {
    // Phase A: single-agent improving moves until none remains.
    for (bool moved = true; moved;) {
      moved = false;
      const auto open = open_facilities(inst, s);
      for (int i = 0; i < inst.agents(); ++i) {
        if (auto to = improving_move(inst, s, open, i, alpha)) {
          TraceStep step;
          step.kind = TraceStep::Kind::improve;
          step.agent = i;
          step.from = s[i];
          step.to = *to;
          s[i] = *to;
          step.potential = engine_potential(inst, s, alpha);
          trace.steps.push_back(std::move(step));
          moved = true;
          break;
        }
      }
    }

    // Phase B: close one underfunded facility, if any.
    const auto open = open_facilities(inst, s);
    const auto q = q_values(inst, s, alpha);
    bool closed = false;
    for (int k = 0; k < inst.facilities() && !closed; ++k) {
      if (!open[k]) continue;
      const auto members = users(s, k);
      Rat total;
      for (int i : members) total += q[i].value();
      if (!(inst.fcost(k) > total)) continue;

      TraceStep step;
      step.kind = TraceStep::Kind::close;
      step.facility = k;
      step.moved = members;
      for (int i : members) step.targets.push_back(*next_best_response(inst, s, i, alpha));
      for (std::size_t u = 0; u < members.size(); ++u) s[members[u]] = step.targets[u];
      step.potential = engine_potential(inst, s, alpha);
      trace.steps.push_back(std::move(step));
      closed = true;
    }
    if (!closed) break;
  }

  auto prices = q_prices(inst, s, alpha);
  // Quiescence guarantees non-negative Q and funded facilities.
  State state(inst, s, std::move(*prices));
  return StabilizationResult{std::move(state), std::move(trace)};
}

StabilizationResult stabilize(const Instance& inst, std::optional<Assignment> start) {
  return stabilize_alpha(inst, Rat(1), std::move(start));
}

}  // namespace ixpg
