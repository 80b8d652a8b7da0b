#include "ixpg/multi.hpp"

#include <bit>

#include "ixpg/errors.hpp"
#include "ixpg/kernel.hpp"
#include "ixpg/payments.hpp"

namespace ixpg {

namespace {

bool has(FacilitySet set, int k) { return (set >> k & 1U) != 0; }

FacilitySet all_facilities(const Instance& inst) {
  return inst.facilities() == 0 ? 0 : (FacilitySet{1} << inst.facilities()) - 1;
}

FacilitySet open_mask(const MultiAssignment& s) {
  FacilitySet mask = 0;
  for (FacilitySet x : s) mask |= x;
  return mask;
}

Rat connection_sum(const Instance& inst, int agent, FacilitySet set) {
  Rat total;
  for (int k = 0; k < inst.facilities(); ++k) {
    if (has(set, k)) total += inst.cc(agent, k);
  }
  return total;
}

Rat disconnection(const Instance& inst, const MultiAssignment& s, int agent, FacilitySet set) {
  Rat total;
  for (int j = 0; j < inst.agents(); ++j) {
    if (j != agent && (s[j] & set) == 0) total += inst.dc(agent, j);
  }
  return total;
}

Rat modified_cost(const Instance& inst, const MultiAssignment& s, int agent, FacilitySet set,
                  const Rat& alpha) {
  Rat d = disconnection(inst, s, agent, set);
  if (alpha != Rat(1)) d *= alpha;
  return connection_sum(inst, agent, set) + d;
}

void require_user(const MultiAssignment& s, int agent, int facility) {
  if (!has(s[agent], facility)) {
    throw InvalidInput("agent " + std::to_string(agent + 1) + " does not use " +
                       strategy_name(facility));
  }
}

}  // namespace

void require_multi_enumerable(const Instance& inst) {
  if (inst.facilities() > kMaxMultiFacilities) {
    throw SizeCapExceeded("multi-facility mode supports at most " +
                          std::to_string(kMaxMultiFacilities) + " facilities, got " +
                          std::to_string(inst.facilities()));
  }
}

void validate(const Instance& inst, const MultiAssignment& s) {
  require_multi_enumerable(inst);
  if (static_cast<int>(s.size()) != inst.agents()) {
    throw InvalidInput("assignment has " + std::to_string(s.size()) + " entries for " +
                       std::to_string(inst.agents()) + " agents");
  }
  const FacilitySet all = all_facilities(inst);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i] & ~all) != 0) {
      throw InvalidInput("agent " + std::to_string(i + 1) + " uses an unknown facility");
    }
  }
}

MultiAssignment to_multi(const Assignment& s) {
  MultiAssignment out(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != kNoFacility) out[i] = FacilitySet{1} << s[i];
  }
  return out;
}

std::string set_name(FacilitySet set) {
  std::string out = "{";
  for (int k = 0; set >> k; ++k) {
    if (!has(set, k)) continue;
    if (out.size() > 1) out += ',';
    out += strategy_name(k);
  }
  return out + "}";
}

std::vector<bool> open_facilities(const Instance& inst, const MultiAssignment& s) {
  const FacilitySet mask = open_mask(s);
  std::vector<bool> open(inst.facilities());
  for (int k = 0; k < inst.facilities(); ++k) open[k] = has(mask, k);
  return open;
}

std::vector<int> users(const MultiAssignment& s, int facility) {
  std::vector<int> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (has(s[i], facility)) out.push_back(static_cast<int>(i));
  }
  return out;
}

Rat tc_multi(const Instance& inst, const MultiAssignment& s, int agent) {
  return tc_multi_if(inst, s, agent, s[agent]);
}

Rat tc_multi_if(const Instance& inst, const MultiAssignment& s, int agent, FacilitySet alt) {
  return connection_sum(inst, agent, alt) + disconnection(inst, s, agent, alt);
}

namespace {

// Connection part, disconnected dc over unordered pairs, open facility costs.
struct CostParts {
  Rat connection;
  Rat disconnected;
  Rat facilities;
};

CostParts cost_parts(const Instance& inst, const MultiAssignment& s) {
  validate(inst, s);
  CostParts parts;
  const int n = inst.agents();
  for (int i = 0; i < n; ++i) {
    parts.connection += connection_sum(inst, i, s[i]);
    for (int j = i + 1; j < n; ++j) {
      if ((s[i] & s[j]) == 0) parts.disconnected += inst.dc(i, j);
    }
  }
  const FacilitySet open = open_mask(s);
  for (int k = 0; k < inst.facilities(); ++k) {
    if (has(open, k)) parts.facilities += inst.fcost(k);
  }
  return parts;
}

}  // namespace

Rat social_cost_multi(const Instance& inst, const MultiAssignment& s) {
  const auto parts = cost_parts(inst, s);
  return parts.facilities + parts.connection + Rat(2) * parts.disconnected;
}

Rat potential_multi(const Instance& inst, const MultiAssignment& s, PotentialKind kind,
                    const Rat& alpha) {
  const auto parts = cost_parts(inst, s);
  switch (kind) {
    case PotentialKind::tilde:
      return parts.connection + parts.disconnected;
    case PotentialKind::full:
      return parts.connection + parts.disconnected + parts.facilities;
    case PotentialKind::alpha:
      require_alpha_range(alpha);
      return parts.connection + alpha * parts.disconnected + parts.facilities;
  }
  return {};
}

std::vector<FacilitySet> valid_deviations(const Instance& inst, const MultiAssignment& s,
                                          int agent) {
  validate(inst, s);
  std::vector<FacilitySet> out;
  for (FacilitySet x = 0; x <= all_facilities(inst); ++x) {
    if (std::popcount(s[agent] & ~x) <= 1) out.push_back(x);
  }
  return out;
}

bool set_precedes(FacilitySet a, FacilitySet b) {
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  const FacilitySet diff = a ^ b;
  if (diff == 0) return false;
  return has(a, std::countr_zero(diff));
}

FacilitySet next_best_response_multi(const Instance& inst, const MultiAssignment& s, int agent,
                                     int facility, const Rat& alpha) {
  validate(inst, s);
  require_user(s, agent, facility);
  const FacilitySet keep = s[agent] & ~(FacilitySet{1} << facility);
  // Extras come from facilities open in s, other than f_k and those kept.
  const FacilitySet extras = open_mask(s) & ~keep & ~(FacilitySet{1} << facility);

  std::optional<FacilitySet> best;
  Rat best_cost;
  // Enumerate every subset of `extras`.
  for (FacilitySet sub = extras;; sub = (sub - 1) & extras) {
    const FacilitySet x = keep | sub;
    Rat cost = modified_cost(inst, s, agent, x, alpha);
    if (!best || cost < best_cost || (cost == best_cost && set_precedes(x, *best))) {
      best = x;
      best_cost = std::move(cost);
    }
    if (sub == 0) break;
  }
  return *best;
}

Rat q_value_multi(const Instance& inst, const MultiAssignment& s, int agent, int facility,
                  const Rat& alpha) {
  const FacilitySet next = next_best_response_multi(inst, s, agent, facility, alpha);
  return modified_cost(inst, s, agent, next, alpha) -
         modified_cost(inst, s, agent, s[agent], alpha);
}

MultiState::MultiState(const Instance& inst, MultiAssignment s, PricingStrategy prices)
    : s_(std::move(s)), prices_(std::move(prices)) {
  validate(inst, s_);
  if (prices_.rows() != inst.agents() || prices_.cols() != inst.facilities()) {
    throw InvalidInput("prices must be n x m");
  }
  for (int i = 0; i < inst.agents(); ++i) {
    for (int k = 0; k < inst.facilities(); ++k) {
      const int sign = prices_(i, k).sign();
      if (sign < 0) throw InvalidInput("negative price");
      if (sign > 0 && !has(s_[i], k)) {
        throw InvalidInput("agent " + std::to_string(i + 1) + " is charged for " +
                           strategy_name(k) + " without using it");
      }
    }
  }
}

MultiState::MultiState(const Instance& inst, MultiAssignment s)
    : MultiState(inst, std::move(s), zero_prices(inst)) {}

MultiStabilityCertificate is_stable_multi(const Instance& inst, const MultiState& state) {
  return is_stable_multi(inst, state,
                         RatMatrix::Constant(inst.agents(), inst.facilities(), Rat()));
}

MultiStabilityCertificate is_stable_multi(const Instance& inst, const MultiState& state,
                                          const MultiPayments& payments) {
  const auto& s = state.assignment();
  const auto& gamma = state.prices();
  const int n = inst.agents();
  const int m = inst.facilities();
  if (payments.rows() != n || payments.cols() != m) {
    throw InvalidInput("payments must be n x m");
  }

  MultiStabilityCertificate cert;
  cert.budget_balanced = true;
  const FacilitySet open = open_mask(s);
  for (int k = 0; k < m; ++k) {
    Rat collected;
    for (int i = 0; i < n; ++i) collected += gamma(i, k);
    const Rat due = has(open, k) ? inst.fcost(k) : Rat();
    if (collected != due) {
      cert.budget_balanced = false;
      cert.violations.push_back(strategy_name(k) + " not budget balanced");
    }
  }

  cert.sufficient.assign(n, true);
  cert.literal.assign(n, true);
  const FacilitySet all = all_facilities(inst);
  for (int i = 0; i < n; ++i) {
    const Rat now = tc_multi(inst, s, i);
    auto net = [&](FacilitySet kept) {
      Rat total;
      for (int k = 0; k < m; ++k) {
        if (has(kept, k)) total += gamma(i, k) - payments(i, k);
      }
      return total;
    };

    for (FacilitySet x = 0; x <= all && cert.sufficient[i]; ++x) {
      if ((x & s[i]) == s[i] && x != s[i] && tc_multi_if(inst, s, i, x) < now) {
        cert.sufficient[i] = false;
      }
    }
    for (int k = 0; k < m && cert.sufficient[i]; ++k) {
      if (has(s[i], k) && gamma(i, k) - payments(i, k) > q_value_multi(inst, s, i, k)) {
        cert.sufficient[i] = false;
      }
    }

    const Rat lhs = now + net(s[i]);
    for (FacilitySet x = 0; x <= all; ++x) {
      if (x == s[i] || std::popcount(s[i] & ~x) > 1) continue;
      if (lhs > tc_multi_if(inst, s, i, x) + net(s[i] & x)) {
        cert.literal[i] = false;
        cert.violations.push_back("agent " + std::to_string(i + 1) + " unstable: prefers " +
                                  set_name(x));
        break;
      }
    }
  }

  cert.stable = cert.budget_balanced;
  for (bool ok : cert.literal) cert.stable = cert.stable && ok;
  return cert;
}

bool MultiStabilizationTrace::strictly_decreasing() const {
  const Rat* prev = &initial_potential;
  for (const auto& step : steps) {
    if (!(step.potential < *prev)) return false;
    prev = &step.potential;
  }
  return true;
}

namespace {

// Cheapest strictly improving valid deviation avoiding facilities closed in s.
std::optional<FacilitySet> improving_move(const Instance& inst, const MultiAssignment& s,
                                          int agent, const Rat& alpha) {
  const FacilitySet allowed = open_mask(s);
  const FacilitySet current = s[agent];
  std::optional<FacilitySet> best;
  Rat best_cost = modified_cost(inst, s, agent, current, alpha);
  for (FacilitySet sub = allowed;; sub = (sub - 1) & allowed) {
    if (sub != current && std::popcount(current & ~sub) <= 1) {
      Rat cost = modified_cost(inst, s, agent, sub, alpha);
      if (cost < best_cost || (best && cost == best_cost && set_precedes(sub, *best))) {
        best = sub;
        best_cost = std::move(cost);
      }
    }
    if (sub == 0) break;
  }
  return best;
}

}  // namespace

MultiStabilizationResult stabilize_multi(const Instance& inst, std::optional<MultiAssignment> start,
                                         const Rat& alpha) {
  require_alpha_range(alpha);
  MultiAssignment s = start ? std::move(*start) : MultiAssignment(inst.agents(), 0);
  validate(inst, s);
  const int n = inst.agents();
  const int m = inst.facilities();
  auto phi = [&] { return potential_multi(inst, s, PotentialKind::alpha, alpha); };

  MultiStabilizationTrace trace;
  trace.initial_potential = phi();

  while (true) {
    for (bool moved = true; moved;) {
      moved = false;
      for (int i = 0; i < n && !moved; ++i) {
        if (auto to = improving_move(inst, s, i, alpha)) {
          MultiTraceStep step;
          step.agent = i;
          step.from = s[i];
          step.to = *to;
          s[i] = *to;
          step.potential = phi();
          trace.steps.push_back(std::move(step));
          moved = true;
        }
      }
    }

    bool closed = false;
    for (int k = 0; k < m && !closed; ++k) {
      const auto members = users(s, k);
      if (members.empty()) continue;
      Rat total;
      for (int i : members) total += q_value_multi(inst, s, i, k, alpha);
      if (!(inst.fcost(k) > total)) continue;

      MultiTraceStep step;
      step.kind = MultiTraceStep::Kind::close;
      step.facility = k;
      step.moved = members;
      for (int i : members) step.targets.push_back(next_best_response_multi(inst, s, i, k, alpha));
      for (std::size_t u = 0; u < members.size(); ++u) s[members[u]] = step.targets[u];
      step.potential = phi();
      trace.steps.push_back(std::move(step));
      closed = true;
    }
    if (!closed) break;
  }

  // Quiescence: every Q_i(s, f_k) >= 0 and every open facility is covered.
  PricingStrategy prices = zero_prices(inst);
  for (int k = 0; k < m; ++k) {
    const auto members = users(s, k);
    if (members.empty() || inst.fcost(k).is_zero()) continue;
    std::vector<Rat> q;
    Rat total;
    for (int i : members) {
      q.push_back(q_value_multi(inst, s, i, k, alpha));
      total += q.back();
    }
    const Rat scale = inst.fcost(k) / total;
    for (std::size_t u = 0; u < members.size(); ++u) prices(members[u], k) = q[u] * scale;
  }
  return {MultiState(inst, std::move(s), std::move(prices)), std::move(trace)};
}

MultiPeeringResult peering_payments_multi(const Instance& inst, const MultiAssignment& s_star) {
  validate(inst, s_star);
  const int n = inst.agents();
  const int m = inst.facilities();
  MultiPeeringResult out;
  out.feasible = true;
  out.p.assign(m, RatMatrix::Constant(n, n, Rat()));
  out.prices = zero_prices(inst);
  out.payments = RatMatrix::Constant(n, m, Rat());

  for (int k = 0; k < m; ++k) {
    auto members = users(s_star, k);
    if (members.empty()) continue;
    std::vector<Rat> supplies;
    for (int i : members) supplies.push_back(q_value_multi(inst, s_star, i, k));
    const auto circ = make_circulation(inst, k, members, supplies);
    const auto flows = solve_circulation(circ);
    if (!flows.feasible) {
      out.feasible = false;
      out.failed_facility = k;
      for (int u : flows.violating_users) out.violating_agents.push_back(circ.agents[u]);
      out.refutation = s_star;
      for (int i : out.violating_agents) {
        out.refutation[i] = next_best_response_multi(inst, s_star, i, k);
      }
      break;
    }
    Rat collected;
    for (const Rat& v : flows.to_facility) collected += v;
    for (std::size_t u = 0; u < members.size(); ++u) {
      const int i = members[u];
      for (std::size_t v = 0; v < members.size(); ++v) {
        if (u != v) out.p[k](i, members[v]) = flows.net[u][v];
      }
      if (!collected.is_zero()) out.prices(i, k) = flows.to_facility[u] * inst.fcost(k) / collected;
    }
  }

  if (!out.feasible) {
    out.p.assign(m, RatMatrix::Constant(n, n, Rat()));
    out.prices = zero_prices(inst);
    return out;
  }
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out.payments(i, k) += out.p[k](j, i);
    }
  }
  return out;
}

std::uint64_t multi_assignment_count(const Instance& inst) {
  const std::uint64_t bits =
      static_cast<std::uint64_t>(inst.agents()) * static_cast<std::uint64_t>(inst.facilities());
  if (bits >= 63 || (std::uint64_t{1} << bits) > kEnumerationCap) return kEnumerationCap + 1;
  return std::uint64_t{1} << bits;
}

namespace {

template <class Scalar, class Unscale>
MultiOptimum enumerate_multi(const CostKernel<Scalar>& kernel, Unscale unscale) {
  const int n = kernel.agents();
  const int m = kernel.facilities();
  const auto& cc = kernel.connection_costs();
  const auto& dc = kernel.disconnection_costs();
  const auto& fcost = kernel.facility_costs();
  const FacilitySet sets = FacilitySet{1} << m;

  // connection(i, x): sum of cc over set x.
  std::vector<std::vector<Scalar>> connection(n, std::vector<Scalar>(sets, Scalar(0)));
  std::vector<Scalar> open_cost(sets, Scalar(0));
  for (FacilitySet x = 1; x < sets; ++x) {
    const int low = std::countr_zero(x);
    const FacilitySet rest = x & (x - 1);
    open_cost[x] = open_cost[rest] + fcost(low);
    for (int i = 0; i < n; ++i) connection[i][x] = connection[i][rest] + cc(i, low);
  }

  MultiAssignment s(n, 0);
  MultiOptimum best;
  std::optional<Scalar> best_cost;
  while (true) {
    FacilitySet open = 0;
    Scalar cost(0);
    for (int i = 0; i < n; ++i) {
      open |= s[i];
      cost += connection[i][s[i]];
      for (int j = i + 1; j < n; ++j) {
        if ((s[i] & s[j]) == 0) cost += Scalar(2) * dc(i, j);
      }
    }
    cost += open_cost[open];
    if (!best_cost || cost < *best_cost) {
      best_cost = cost;
      best.assignment = s;
    }
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++s[i] < sets) break;
      s[i] = 0;
    }
    if (i < 0) break;
  }
  best.cost = unscale(*best_cost);
  return best;
}

}  // namespace

MultiOptimum brute_force_optimum_multi(const Instance& inst) {
  require_multi_enumerable(inst);
  if (multi_assignment_count(inst) > kEnumerationCap) {
    throw SizeCapExceeded("2^(n m) = 2^" + std::to_string(inst.agents() * inst.facilities()) +
                          " exceeds the enumeration cap of " + std::to_string(kEnumerationCap));
  }
  if (auto scaled = integer_kernel(inst)) {
    return enumerate_multi(scaled->kernel, [&](std::int64_t v) { return scaled->unscale(v); });
  }
  return enumerate_multi(rational_kernel(inst), [](const Rat& v) { return v; });
}

}  // namespace ixpg
