#include "ixpg/game.hpp"

#include "ixpg/errors.hpp"

namespace ixpg {

namespace {

// Sum of dc(agent, j) over the other users of each facility.
std::vector<Rat> shared_dc(const Instance& inst, const Assignment& s, int agent) {
  std::vector<Rat> shared(inst.facilities());
  for (int j = 0; j < inst.agents(); ++j) {
    if (j != agent && s[j] != kNoFacility) shared[s[j]] += inst.dc(agent, j);
  }
  return shared;
}

Rat disconnected_dc(const Instance& inst, const std::vector<Rat>& shared, int agent, Strategy x) {
  return x == kNoFacility ? inst.dc_total(agent) : inst.dc_total(agent) - shared[x];
}

}  // namespace

Rat tc(const Instance& inst, const Assignment& s, int agent) {
  return tc_if(inst, s, agent, s[agent]);
}

Rat tc_if(const Instance& inst, const Assignment& s, int agent, Strategy alt) {
  Rat cost = inst.connection(agent, alt);
  for (int j = 0; j < inst.agents(); ++j) {
    if (j == agent) continue;
    if (alt == kNoFacility || s[j] != alt) cost += inst.dc(agent, j);
  }
  return cost;
}

std::vector<Rat> strategy_costs(const Instance& inst, const Assignment& s, int agent,
                                const Rat& alpha) {
  const auto shared = shared_dc(inst, s, agent);
  const bool unit = alpha == Rat(1);
  std::vector<Rat> out;
  out.reserve(inst.facilities() + 1);
  for (Strategy x = kNoFacility; x < inst.facilities(); ++x) {
    Rat d = disconnected_dc(inst, shared, agent, x);
    if (!unit) d *= alpha;
    out.push_back(inst.connection(agent, x) + d);
  }
  return out;
}

Rat rc(const Instance& inst, const State& state, int agent) {
  return tc(inst, state.assignment(), agent) + state.price_paid(agent);
}

Rat rc(const Instance& inst, const State& state, const PaymentVector& payments, int agent) {
  return rc(inst, state, agent) - payments[agent];
}

Rat social_cost(const Instance& inst, const Assignment& s) {
  Rat cost;
  const auto open = open_facilities(inst, s);
  for (int k = 0; k < inst.facilities(); ++k) {
    if (open[k]) cost += inst.fcost(k);
  }
  Rat disconnected;
  for (int i = 0; i < inst.agents(); ++i) {
    cost += inst.connection(i, s[i]);
    for (int j = i + 1; j < inst.agents(); ++j) {
      if (s[i] == kNoFacility || s[i] != s[j]) disconnected += inst.dc(i, j);
    }
  }
  return cost + Rat(2) * disconnected;
}

void require_alpha_range(const Rat& alpha) {
  if (alpha < Rat(1) || alpha > Rat(2)) {
    throw InvalidInput("alpha must lie in [1, 2], got " + alpha.str());
  }
}

Rat potential(const Instance& inst, const Assignment& s, PotentialKind kind, const Rat& alpha) {
  if (kind == PotentialKind::alpha) require_alpha_range(alpha);
  Rat connection;
  Rat disconnected;
  for (int i = 0; i < inst.agents(); ++i) {
    connection += inst.connection(i, s[i]);
    for (int j = i + 1; j < inst.agents(); ++j) {
      if (s[i] == kNoFacility || s[i] != s[j]) disconnected += inst.dc(i, j);
    }
  }
  if (kind == PotentialKind::tilde) return connection + disconnected;

  Rat facilities;
  const auto open = open_facilities(inst, s);
  for (int k = 0; k < inst.facilities(); ++k) {
    if (open[k]) facilities += inst.fcost(k);
  }
  if (kind == PotentialKind::full) return connection + disconnected + facilities;
  return connection + alpha * disconnected + facilities;
}

namespace {

struct NextBest {
  std::optional<Strategy> strategy;
  ExtRat q;
};

NextBest next_best(const Instance& inst, const Assignment& s, const std::vector<bool>& open,
                   int agent, const Rat& alpha) {
  const auto costs = strategy_costs(inst, s, agent, alpha);
  const Strategy current = s[agent];
  std::optional<Strategy> best;
  // Candidates in tie-break order: empty first, then facilities by index.
  // A closed facility is never better than the empty strategy, so it is
  // skipped unless the agent is at the empty strategy already.
  for (Strategy x = kNoFacility; x < inst.facilities(); ++x) {
    if (x == current) continue;
    if (x != kNoFacility && current != kNoFacility && !open[x]) continue;
    if (!best || costs[x + 1] < costs[*best + 1]) best = x;
  }
  if (!best) return {std::nullopt, ExtRat::infinity()};
  return {best, ExtRat(costs[*best + 1] - costs[current + 1])};
}

}  // namespace

std::optional<Strategy> next_best_response(const Instance& inst, const Assignment& s, int agent,
                                           const Rat& alpha) {
  return next_best(inst, s, open_facilities(inst, s), agent, alpha).strategy;
}

ExtRat q_value(const Instance& inst, const Assignment& s, int agent, const Rat& alpha) {
  return next_best(inst, s, open_facilities(inst, s), agent, alpha).q;
}

std::vector<ExtRat> q_values(const Instance& inst, const Assignment& s, const Rat& alpha) {
  const auto open = open_facilities(inst, s);
  std::vector<ExtRat> out;
  out.reserve(inst.agents());
  for (int i = 0; i < inst.agents(); ++i) out.push_back(next_best(inst, s, open, i, alpha).q);
  return out;
}

namespace {

struct Shortfall {
  int facility;
  Rat collected;
};

std::vector<Shortfall> unbalanced(const Instance& inst, const State& state) {
  const auto& s = state.assignment();
  std::vector<Rat> collected(inst.facilities());
  std::vector<bool> open(inst.facilities(), false);
  for (int i = 0; i < inst.agents(); ++i) {
    if (s[i] == kNoFacility) continue;
    open[s[i]] = true;
    collected[s[i]] += state.prices()(i, s[i]);
  }
  std::vector<Shortfall> out;
  for (int k = 0; k < inst.facilities(); ++k) {
    if (open[k] && collected[k] != inst.fcost(k)) out.push_back({k, collected[k]});
  }
  return out;
}

}  // namespace

bool is_budget_balanced(const Instance& inst, const State& state) {
  return unbalanced(inst, state).empty();
}

namespace {

StabilityCertificate finish(const Instance& inst, const State& state, StabilityCertificate cert) {
  const auto shortfalls = unbalanced(inst, state);
  cert.budget_balanced = shortfalls.empty();
  for (const auto& sf : shortfalls) {
    cert.violations.push_back(strategy_name(sf.facility) + " not budget balanced (collects " +
                              sf.collected.str() + ", costs " + inst.fcost(sf.facility).str() + ")");
  }
  cert.stable = cert.budget_balanced;
  for (int i = 0; i < inst.agents(); ++i) {
    if (!cert.agent_stable[i]) {
      cert.stable = false;
      cert.violations.push_back("agent " + std::to_string(i + 1) + " unstable");
    }
  }
  return cert;
}

}  // namespace

StabilityCertificate certify(const Instance& inst, const State& state,
                             std::vector<bool> agent_stable) {
  StabilityCertificate cert;
  cert.agent_stable = std::move(agent_stable);
  return finish(inst, state, std::move(cert));
}

StabilityCertificate is_stable(const Instance& inst, const State& state) {
  return is_stable(inst, state, PaymentVector::zeros(inst.agents()));
}

StabilityCertificate is_stable(const Instance& inst, const State& state,
                               const PaymentVector& payments) {
  StabilityCertificate cert;
  const auto q = q_values(inst, state.assignment());
  cert.agent_stable.resize(inst.agents());
  for (int i = 0; i < inst.agents(); ++i) {
    cert.agent_stable[i] = ExtRat(state.price_paid(i) - payments[i]) <= q[i];
  }
  return finish(inst, state, std::move(cert));
}

StabilityCertificate is_alpha_stable(const Instance& inst, const State& state, const Rat& alpha) {
  if (alpha < Rat(1)) throw InvalidInput("alpha must be at least 1");
  StabilityCertificate cert;
  const auto& s = state.assignment();
  cert.agent_stable.resize(inst.agents());
  for (int i = 0; i < inst.agents(); ++i) {
    const auto costs = strategy_costs(inst, s, i);
    const Rat current = costs[s[i] + 1] + state.price_paid(i);
    bool ok = true;
    for (Strategy x = kNoFacility; x < inst.facilities() && ok; ++x) {
      if (x != s[i] && current > alpha * costs[x + 1]) ok = false;
    }
    cert.agent_stable[i] = ok;
  }
  return finish(inst, state, std::move(cert));
}

}  // namespace ixpg
