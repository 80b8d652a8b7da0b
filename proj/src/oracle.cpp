#include "ixpg/oracle.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "ixpg/errors.hpp"
#include "ixpg/kernel.hpp"

namespace ixpg {

Ratio Ratio::of(const Rat& cost, const Rat& optimum) {
  if (optimum.is_zero()) return cost.is_zero() ? Ratio{Rat(1)} : Ratio{};
  return Ratio{cost / optimum};
}

std::string Ratio::str() const { return value ? value->str() : std::string("unbounded"); }

std::uint64_t single_assignment_count(const Instance& inst) {
  std::uint64_t count = 1;
  for (int i = 0; i < inst.agents(); ++i) {
    count *= static_cast<std::uint64_t>(inst.facilities() + 1);
    if (count > kEnumerationCap) return kEnumerationCap + 1;
  }
  return count;
}

namespace {

void require_enumerable(const Instance& inst) {
  if (single_assignment_count(inst) > kEnumerationCap) {
    throw SizeCapExceeded("(m+1)^n = " + std::to_string(inst.facilities() + 1) + "^" +
                          std::to_string(inst.agents()) + " exceeds the enumeration cap of " +
                          std::to_string(kEnumerationCap));
  }
}

// Visits every assignment in lexicographic order, empty strategy first.
template <class Visit>
void for_each_assignment(int n, int m, Visit&& visit) {
  Assignment s(n, kNoFacility);
  while (true) {
    visit(s);
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++s[i] < m) break;
      s[i] = kNoFacility;
    }
    if (i < 0) return;
  }
}

template <class Scalar, class Unscale>
OracleReport enumerate(const Instance& inst, CostKernel<Scalar>& kernel, Unscale unscale,
                       bool with_stable) {
  const int n = inst.agents();
  const int m = inst.facilities();
  OracleReport report;
  std::optional<Scalar> best;
  std::vector<std::optional<Scalar>> q;

  for_each_assignment(n, m, [&](const Assignment& s) {
    Scalar cost = kernel.social_cost(s);
    if (with_stable && kernel.stabilizable(s, q)) {
      PricingStrategy prices = zero_prices(inst);
      for (int k = 0; k < m; ++k) {
        if (!kernel.is_open(k) || inst.fcost(k).is_zero()) continue;
        Scalar total(0);
        for (int i = 0; i < n; ++i) {
          if (s[i] == k) total += *q[i];
        }
        const Rat scale = inst.fcost(k) / unscale(total);
        for (int i = 0; i < n; ++i) {
          if (s[i] == k) prices(i, k) = unscale(*q[i]) * scale;
        }
      }
      report.stabilizable.push_back({s, unscale(cost), std::move(prices)});
    }
    if (!best || cost < *best) {
      best = std::move(cost);
      report.optimum.assignment = s;
    }
  });
  report.optimum.cost = unscale(*best);
  return report;
}

OracleReport run(const Instance& inst, bool with_stable) {
  require_enumerable(inst);
  OracleReport report;
  if (auto scaled = integer_kernel(inst)) {
    const std::int64_t scale = scaled->scale;
    report = enumerate(inst, scaled->kernel,
                       [scale](std::int64_t v) { return Rat(static_cast<long>(v), static_cast<long>(scale)); },
                       with_stable);
  } else {
    auto kernel = rational_kernel(inst);
    report = enumerate(inst, kernel, [](const Rat& v) { return v; }, with_stable);
  }
  if (!with_stable) return report;

  if (report.stabilizable.empty()) throw std::logic_error("no stabilizable assignment found");
  const Rat* lo = &report.stabilizable.front().cost;
  const Rat* hi = lo;
  for (const auto& st : report.stabilizable) {
    if (st.cost < *lo) lo = &st.cost;
    if (st.cost > *hi) hi = &st.cost;
  }
  report.pos = Ratio::of(*lo, report.optimum.cost);
  report.poa = Ratio::of(*hi, report.optimum.cost);
  return report;
}

struct CacheEntry {
  Instance instance;
  std::shared_ptr<const OracleReport> report;
};

bool same_instance(const Instance& a, const Instance& b) {
  return a.agents() == b.agents() && a.facilities() == b.facilities() &&
         a.connection_costs() == b.connection_costs() &&
         a.disconnection_costs() == b.disconnection_costs() &&
         a.facility_costs() == b.facility_costs();
}

}  // namespace

Optimum brute_force_optimum(const Instance& inst) { return run(inst, false).optimum; }

std::vector<StabilizableState> enumerate_stabilizable(const Instance& inst) {
  return oracle_report(inst)->stabilizable;
}

std::shared_ptr<const OracleReport> oracle_report(const Instance& inst) {
  static std::mutex mutex;
  static std::multimap<std::uint64_t, CacheEntry> cache;

  const auto key = instance_hash(inst);
  {
    std::lock_guard lock(mutex);
    auto [first, last] = cache.equal_range(key);
    for (auto it = first; it != last; ++it) {
      if (same_instance(it->second.instance, inst)) return it->second.report;
    }
  }
  // Computed outside the lock; a concurrent duplicate is harmless.
  auto report = std::make_shared<const OracleReport>(run(inst, true));
  std::lock_guard lock(mutex);
  cache.emplace(key, CacheEntry{inst, report});
  return report;
}

Ratio price_of_stability(const Instance& inst) { return oracle_report(inst)->pos; }
Ratio price_of_anarchy(const Instance& inst) { return oracle_report(inst)->poa; }

StabilityCertificate literal_stability(const Instance& inst, const State& state,
                                       const PaymentVector& payments) {
  const auto& s = state.assignment();
  std::vector<bool> ok(inst.agents(), true);
  for (int i = 0; i < inst.agents(); ++i) {
    const Rat current = rc(inst, state, payments, i);
    for (Strategy x = kNoFacility; x < inst.facilities(); ++x) {
      if (x != s[i] && current > tc_if(inst, s, i, x)) {
        ok[i] = false;
        break;
      }
    }
  }
  return certify(inst, state, std::move(ok));
}

StabilityCertificate literal_stability(const Instance& inst, const State& state) {
  return literal_stability(inst, state, PaymentVector::zeros(inst.agents()));
}

namespace {

bool try_vertices(const Instance& inst, const Assignment& s, const std::vector<ExtRat>& q,
                  const std::vector<int>& open, std::size_t next, PricingStrategy& prices) {
  if (next == open.size()) {
    return literal_stability(inst, State(inst, s, prices)).stable;
  }
  const int k = open[next];
  const auto members = users(s, k);
  const auto count = members.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << count); ++mask) {
    Rat total;
    bool usable = true;
    for (std::size_t b = 0; b < count && usable; ++b) {
      if (!(mask >> b & 1)) continue;
      const ExtRat& qi = q[members[b]];
      // Only finite positive Q-values are worth charging.
      if (!qi.is_finite() || qi.value().sign() <= 0) usable = false;
      else total += qi.value();
    }
    if (!usable || total < inst.fcost(k)) continue;
    for (std::size_t b = 0; b < count; ++b) {
      const bool pays = (mask >> b & 1) && !inst.fcost(k).is_zero();
      prices(members[b], k) = pays ? q[members[b]].value() * inst.fcost(k) / total : Rat();
    }
    if (try_vertices(inst, s, q, open, next + 1, prices)) return true;
  }
  return false;
}

}  // namespace

bool stabilizable_by_price_vertices(const Instance& inst, const Assignment& s) {
  validate(inst, s);
  const auto q = q_values(inst, s);
  const auto open_mask = open_facilities(inst, s);
  std::vector<int> open;
  for (int k = 0; k < inst.facilities(); ++k) {
    if (open_mask[k]) open.push_back(k);
  }
  PricingStrategy prices = zero_prices(inst);
  return try_vertices(inst, s, q, open, 0, prices);
}

}  // namespace ixpg
