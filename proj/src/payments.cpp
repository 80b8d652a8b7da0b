#include "ixpg/payments.hpp"

#include "ixpg/errors.hpp"

namespace ixpg {

DirectScheme direct_payment_scheme(const Instance& inst, const Assignment& s_star) {
  validate(inst, s_star);
  const int n = inst.agents();
  const auto q = q_values(inst, s_star);
  DirectScheme out{zero_prices(inst), PaymentVector::zeros(n), true, {}};

  std::vector<Rat> charged(inst.facilities());
  for (int i = 0; i < n; ++i) {
    if (!q[i].is_finite()) continue;
    const Rat& qi = q[i].value();
    if (qi.sign() < 0) {
      out.payments.delta(i) = -qi;
    } else if (s_star[i] != kNoFacility) {
      out.prices(i, s_star[i]) = qi;
      charged[s_star[i]] += qi;
    }
  }
  const auto open = open_facilities(inst, s_star);
  for (int k = 0; k < inst.facilities(); ++k) {
    if (!open[k]) continue;
    if (charged[k] < inst.fcost(k)) {
      out.balanced = false;
      out.unfunded.push_back(k);
      continue;
    }
    if (charged[k].is_zero()) continue;
    const Rat scale = inst.fcost(k) / charged[k];
    for (int i = 0; i < n; ++i) {
      if (s_star[i] == k) out.prices(i, k) *= scale;
    }
  }
  return out;
}

Rat minimum_total_payment(const Instance& inst, const Assignment& s) {
  validate(inst, s);
  const auto q = q_values(inst, s);
  Rat total;
  std::vector<Rat> chargeable(inst.facilities());
  for (int i = 0; i < inst.agents(); ++i) {
    if (!q[i].is_finite()) continue;
    const Rat& qi = q[i].value();
    if (qi.sign() < 0) total -= qi;
    else if (s[i] != kNoFacility) chargeable[s[i]] += qi;
  }
  const auto open = open_facilities(inst, s);
  for (int k = 0; k < inst.facilities(); ++k) {
    if (open[k] && chargeable[k] < inst.fcost(k)) total += inst.fcost(k) - chargeable[k];
  }
  return total;
}

TradeoffReport tradeoff_check(const Instance& inst) {
  const auto report = oracle_report(inst);
  TradeoffReport out;
  out.optimum = report->optimum;
  out.pos = report->pos;
  out.delta = direct_payment_scheme(inst, out.optimum.assignment).payments.total();
  if (out.pos.value) out.bound = Rat(1) - Rat(2, 5) * *out.pos.value;
  if (out.optimum.cost.is_zero()) {
    out.skipped = true;
    out.holds = out.delta.is_zero();
    return out;
  }
  out.ratio = out.delta / out.optimum.cost;
  out.holds = out.bound && *out.ratio <= *out.bound;
  return out;
}

namespace {

// Empty strategy ranks below every facility.
int rank(Strategy s) { return s + 1; }

}  // namespace

WitnessStates witness_states(const Instance& inst, const Assignment& s_star) {
  validate(inst, s_star);
  const int n = inst.agents();
  const auto open = open_facilities(inst, s_star);
  WitnessStates w;
  w.b.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto costs = strategy_costs(inst, s_star, i);
    Strategy best = s_star[i];
    for (Strategy x = kNoFacility; x < inst.facilities(); ++x) {
      if (x != kNoFacility && !open[x]) continue;
      if (costs[x + 1] < costs[best + 1]) best = x;
    }
    w.b[i] = best;
    w.best_reply_total += costs[best + 1];
    (rank(best) >= rank(s_star[i]) ? w.part1 : w.part2).push_back(i);
  }

  w.s0 = w.b;
  w.s1 = s_star;
  w.s2 = s_star;
  for (int i : w.part1) w.s1[i] = w.b[i];
  for (int i : w.part2) w.s2[i] = w.b[i];

  const Rat four_fifths(4, 5);
  const Assignment* candidates[] = {&w.s0, &w.s1, &w.s2};
  for (int c = 0; c < 3 && !w.witness; ++c) {
    if (w.best_reply_total >= four_fifths * potential(inst, *candidates[c], PotentialKind::tilde)) {
      w.witness = c;
    }
  }
  return w;
}

bool parts_are_swap_free(const WitnessStates& w, const Assignment& s_star) {
  for (const auto* part : {&w.part1, &w.part2}) {
    for (int i : *part) {
      for (int j : *part) {
        if (w.b[i] != w.b[j] && w.b[i] == s_star[j] && w.b[j] == s_star[i]) return false;
      }
    }
  }
  return true;
}

CirculationNetwork make_circulation(const Instance& inst, int facility, std::vector<int> agents,
                                    const std::vector<Rat>& supplies) {
  const int users_count = static_cast<int>(agents.size());
  CirculationNetwork c;
  c.facility = facility;
  c.agents = std::move(agents);
  Rat total;
  for (int u = 0; u < users_count; ++u) {
    c.network.add_node(supplies[u]);
    total += supplies[u];
  }
  const Rat& cost = inst.fcost(facility);
  c.facility_node = c.network.add_node(-cost);
  c.z_node = c.network.add_node(cost - total);

  c.arc_between.assign(users_count, std::vector<int>(users_count, -1));
  for (int u = 0; u < users_count; ++u) {
    for (int v = 0; v < users_count; ++v) {
      if (u != v) c.arc_between[u][v] = c.network.add_arc(u, v, inst.dc(c.agents[u], c.agents[v]));
    }
  }
  for (int u = 0; u < users_count; ++u) {
    c.arc_to_facility.push_back(c.network.add_uncapacitated_arc(u, c.facility_node));
  }
  c.network.add_uncapacitated_arc(c.facility_node, c.z_node);
  return c;
}

CirculationNetwork build_circulation(const Instance& inst, const Assignment& s_star, int facility) {
  validate(inst, s_star);
  if (facility < 0 || facility >= inst.facilities() || !open_facilities(inst, s_star)[facility]) {
    throw InvalidInput(strategy_name(facility) + " is not open");
  }
  auto members = users(s_star, facility);
  const auto q = q_values(inst, s_star);
  std::vector<Rat> supplies;
  for (int i : members) supplies.push_back(q[i].value());
  return make_circulation(inst, facility, std::move(members), supplies);
}

CirculationFlows solve_circulation(const CirculationNetwork& c) {
  const int users_count = static_cast<int>(c.agents.size());
  const auto res = feasible_circulation(c.network);
  CirculationFlows out;
  out.feasible = res.feasible;
  if (!res.feasible) {
    for (int v : res.violating_set) {
      if (v < users_count) out.violating_users.push_back(v);
    }
    return out;
  }
  out.net.assign(users_count, std::vector<Rat>(users_count));
  for (int u = 0; u < users_count; ++u) {
    for (int v = 0; v < users_count; ++v) {
      if (u != v) out.net[u][v] = res.flow[c.arc_between[u][v]] - res.flow[c.arc_between[v][u]];
    }
    out.to_facility.push_back(res.flow[c.arc_to_facility[u]]);
  }
  return out;
}

PeeringResult peering_payments(const Instance& inst, const Assignment& s_star) {
  validate(inst, s_star);
  const int n = inst.agents();
  PeeringResult out;
  out.feasible = true;
  out.p = RatMatrix::Constant(n, n, Rat());
  out.net_flow = out.p;
  out.prices = zero_prices(inst);
  out.facility_flow = RatVector::Constant(n, Rat());

  const auto open = open_facilities(inst, s_star);
  for (int k = 0; k < inst.facilities(); ++k) {
    if (!open[k]) continue;
    const auto circ = build_circulation(inst, s_star, k);
    const auto flows = solve_circulation(circ);
    if (!flows.feasible) {
      out.feasible = false;
      out.failed_facility = k;
      for (int u : flows.violating_users) out.violating_agents.push_back(circ.agents[u]);
      out.refutation = s_star;
      for (int i : out.violating_agents) out.refutation[i] = *next_best_response(inst, s_star, i);
      break;
    }
    Rat collected;
    for (std::size_t u = 0; u < circ.agents.size(); ++u) {
      const int i = circ.agents[u];
      out.facility_flow(i) = flows.to_facility[u];
      collected += flows.to_facility[u];
      for (std::size_t v = 0; v < circ.agents.size(); ++v) {
        if (u != v) out.net_flow(i, circ.agents[v]) = flows.net[u][v];
      }
    }
    // The facility node forwards any surplus to z, so collected >= c(f_k).
    if (!collected.is_zero()) {
      const Rat scale = inst.fcost(k) / collected;
      for (int i : circ.agents) out.prices(i, k) = out.facility_flow(i) * scale;
    }
  }

  if (!out.feasible) {
    out.p.setConstant(Rat());
    out.net_flow.setConstant(Rat());
    out.prices = zero_prices(inst);
    out.payments = PaymentVector::zeros(n);
    return out;
  }
  out.p = out.net_flow;
  out.payments = PaymentVector::from_peer_payments(out.p);
  return out;
}

DoubledWeights doubled_weights(const Instance& inst, const Assignment& s_star) {
  const auto peering = peering_payments(inst, s_star);
  if (!peering.feasible) {
    throw InvalidInput("circulation for " + strategy_name(peering.failed_facility) +
                       " is infeasible: the assignment is not optimal");
  }
  RatMatrix dc = inst.disconnection_costs();
  for (int i = 0; i < inst.agents(); ++i) {
    for (int j = 0; j < inst.agents(); ++j) dc(i, j) += abs(peering.net_flow(i, j));
  }
  return {Instance(inst.connection_costs(), std::move(dc), inst.facility_costs()), peering.prices};
}

}  // namespace ixpg
