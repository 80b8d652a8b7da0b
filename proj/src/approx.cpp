#include "ixpg/approx.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ixpg/errors.hpp"

namespace ixpg {

int RelaxationLayout::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // Pairs (0,1), (0,2), ..., (0,n-1), (1,2), ...
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

Relaxation build_relaxation(const Instance& inst) {
  Relaxation rel;
  auto& L = rel.layout;
  L.n = inst.agents();
  L.m = inst.facilities();
  auto& lp = rel.program;
  lp = LinearProgram::boxed(L.variables(), 0.0, 1.0);

  for (int i = 0; i < L.n; ++i) {
    for (int k = 0; k < L.m; ++k) lp.objective(L.x_ik(i, k)) = inst.cc(i, k).to_double();
    for (int j = i + 1; j < L.n; ++j) lp.objective(L.x_ij(i, j)) = 2 * inst.dc(i, j).to_double();
  }
  for (int k = 0; k < L.m; ++k) lp.objective(L.x_k(k)) = inst.fcost(k).to_double();

  for (int i = 0; i < L.n; ++i) {
    for (int j = i + 1; j < L.n; ++j) {
      std::vector<std::pair<int, double>> cover{{L.x_ij(i, j), 1.0}};
      for (int k = 0; k < L.m; ++k) {
        lp.add_row({{L.x_ijk(i, j, k), 1.0}, {L.x_ik(i, k), -1.0}}, Sense::less_equal, 0);
        lp.add_row({{L.x_ijk(i, j, k), 1.0}, {L.x_ik(j, k), -1.0}}, Sense::less_equal, 0);
        cover.emplace_back(L.x_ijk(i, j, k), 1.0);
      }
      // 1 - x_ij <= sum_k x_ijk
      lp.add_row(cover, Sense::greater_equal, 1);
    }
  }
  for (int i = 0; i < L.n; ++i) {
    for (int k = 0; k < L.m; ++k) {
      lp.add_row({{L.x_k(k), 1.0}, {L.x_ik(i, k), -1.0}}, Sense::greater_equal, 0);
    }
  }
  return rel;
}

LpSolution solve_relaxation(const Instance& inst) {
  const auto rel = build_relaxation(inst);
  const auto res = solve_lp(rel.program);
  if (res.status != LpStatus::optimal) throw std::logic_error("relaxation reported infeasible");
  return {rel.layout, res.values, res.objective};
}

Rat ip_objective(const Instance& inst, const RelaxationLayout& L, const Eigen::VectorXi& x) {
  Rat total;
  for (int i = 0; i < L.n; ++i) {
    for (int k = 0; k < L.m; ++k) {
      if (x(L.x_ik(i, k))) total += inst.cc(i, k);
    }
    for (int j = i + 1; j < L.n; ++j) {
      if (x(L.x_ij(i, j))) total += Rat(2) * inst.dc(i, j);
    }
  }
  for (int k = 0; k < L.m; ++k) {
    if (x(L.x_k(k))) total += inst.fcost(k);
  }
  return total;
}

bool ip_feasible(const IntegralSolution& sol) {
  const auto& L = sol.layout;
  const auto& x = sol.values;
  if (x.size() != L.variables()) return false;
  for (int v = 0; v < x.size(); ++v) {
    if (x(v) != 0 && x(v) != 1) return false;
  }
  for (int i = 0; i < L.n; ++i) {
    for (int j = i + 1; j < L.n; ++j) {
      int shared = 0;
      for (int k = 0; k < L.m; ++k) {
        const int xijk = x(L.x_ijk(i, j, k));
        if (xijk > x(L.x_ik(i, k)) || xijk > x(L.x_ik(j, k))) return false;
        shared += xijk;
      }
      if (1 - x(L.x_ij(i, j)) > shared) return false;
    }
    for (int k = 0; k < L.m; ++k) {
      if (x(L.x_k(k)) < x(L.x_ik(i, k))) return false;
    }
  }
  return true;
}

namespace {

// Fills x_ijk, x_ij and x_k from x_ik, as both rounding schemes do.
void complete(const RelaxationLayout& L, Eigen::VectorXi& x) {
  for (int k = 0; k < L.m; ++k) {
    int open = 0;
    for (int i = 0; i < L.n; ++i) open = std::max(open, x(L.x_ik(i, k)));
    x(L.x_k(k)) = open;
  }
  for (int i = 0; i < L.n; ++i) {
    for (int j = i + 1; j < L.n; ++j) {
      int shared = 0;
      for (int k = 0; k < L.m; ++k) {
        const int v = std::min(x(L.x_ik(i, k)), x(L.x_ik(j, k)));
        x(L.x_ijk(i, j, k)) = v;
        shared += v;
      }
      x(L.x_ij(i, j)) = std::max(0, 1 - shared);
    }
  }
}

IntegralSolution finish(const Instance& inst, const RelaxationLayout& L, Eigen::VectorXi x) {
  IntegralSolution sol;
  sol.layout = L;
  sol.assignment.assign(L.n, 0);
  for (int i = 0; i < L.n; ++i) {
    for (int k = 0; k < L.m; ++k) {
      if (x(L.x_ik(i, k))) sol.assignment[i] |= FacilitySet{1} << k;
    }
  }
  sol.objective = ip_objective(inst, L, x);
  sol.values = std::move(x);
  return sol;
}

}  // namespace

IntegralSolution round_deterministic(const LpSolution& lp, const Instance& inst) {
  const auto& L = lp.layout;
  const double threshold = 1.0 / (L.m + 1) - kLpTolerance;
  Eigen::VectorXi x = Eigen::VectorXi::Zero(L.variables());
  for (int i = 0; i < L.n; ++i) {
    for (int k = 0; k < L.m; ++k) x(L.x_ik(i, k)) = lp.values(L.x_ik(i, k)) >= threshold ? 1 : 0;
  }
  complete(L, x);
  return finish(inst, L, std::move(x));
}

int randomized_runs(int agents) {
  return static_cast<int>(std::ceil(4.0 * std::log(10.0 * agents)));
}

Eigen::VectorXi randomized_run(const LpSolution& lp, std::mt19937_64& rng) {
  const auto& L = lp.layout;
  // Values within the tolerance of 0 or 1 are snapped so that integral LP
  // points round to themselves.
  auto snapped = [&](int v) {
    const double x = lp.values(v);
    if (x <= kLpTolerance) return 0.0;
    if (x >= 1 - kLpTolerance) return 1.0;
    return x;
  };
  Eigen::VectorXi run = Eigen::VectorXi::Zero(L.variables());
  for (int k = 0; k < L.m; ++k) {
    // U in (0, 1], so x* = 0 never rounds up and x* = 1 always does.
    const double u = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
    for (int i = 0; i < L.n; ++i) run(L.x_ik(i, k)) = u <= snapped(L.x_ik(i, k)) ? 1 : 0;
  }
  complete(L, run);
  return run;
}

RandomizedRounding round_randomized(const LpSolution& lp, const Instance& inst,
                                    std::uint64_t seed) {
  const auto& L = lp.layout;
  RandomizedRounding out;
  out.seed = seed;
  out.runs = randomized_runs(L.n);

  std::mt19937_64 rng(seed);
  Eigen::VectorXi any = Eigen::VectorXi::Zero(L.variables());
  Eigen::VectorXi always_apart = Eigen::VectorXi::Ones(L.variables());
  for (int t = 0; t < out.runs; ++t) {
    const Eigen::VectorXi run = randomized_run(lp, rng);
    for (int i = 0; i < L.n; ++i) {
      for (int k = 0; k < L.m; ++k) any(L.x_ik(i, k)) |= run(L.x_ik(i, k));
      for (int j = i + 1; j < L.n; ++j) always_apart(L.x_ij(i, j)) &= run(L.x_ij(i, j));
    }
  }

  Eigen::VectorXi x = Eigen::VectorXi::Zero(L.variables());
  for (int i = 0; i < L.n; ++i) {
    for (int k = 0; k < L.m; ++k) x(L.x_ik(i, k)) = any(L.x_ik(i, k));
  }
  complete(L, x);
  // x_ij stays 1 only if the pair was apart in every run, even when the
  // union of runs gives them a common facility.
  for (int i = 0; i < L.n; ++i) {
    for (int j = i + 1; j < L.n; ++j) x(L.x_ij(i, j)) = always_apart(L.x_ij(i, j));
  }
  out.solution = finish(inst, L, std::move(x));
  return out;
}

Assignment project_single(const Instance& inst, const MultiAssignment& s) {
  validate(inst, s);
  Assignment out(s.size(), kNoFacility);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int k = 0; k < inst.facilities(); ++k) {
      if (!(s[i] >> k & 1U)) continue;
      const int a = static_cast<int>(i);
      if (out[i] == kNoFacility || inst.cc(a, k) < inst.cc(a, out[i])) out[i] = k;
    }
  }
  return out;
}

LabelingInstance to_uniform_labeling(const Instance& inst) {
  if (!inst.all_facility_costs_zero()) {
    throw InvalidInput("the labeling reduction needs every facility cost to be zero");
  }
  const int n = inst.agents();
  const int m = inst.facilities();
  LabelingInstance lab;
  lab.nodes = n;
  lab.facility_labels = m;
  lab.big_m = Rat(1);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) lab.big_m += inst.cc(i, k);
    for (int j = 0; j < n; ++j) lab.big_m += inst.dc(i, j);
  }
  lab.label_cost = RatMatrix::Constant(n, m + n, Rat());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) lab.label_cost(i, k) = inst.cc(i, k);
    for (int j = 0; j < n; ++j) lab.label_cost(i, m + j) = i == j ? Rat() : lab.big_m;
  }
  lab.separation = RatMatrix::Constant(n, n, Rat());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lab.separation(i, j) = Rat(2) * inst.dc(i, j);
  }
  return lab;
}

Rat labeling_cost(const LabelingInstance& lab, const std::vector<int>& labels) {
  Rat total;
  for (int i = 0; i < lab.nodes; ++i) {
    total += lab.label_cost(i, labels[i]);
    for (int j = i + 1; j < lab.nodes; ++j) {
      if (labels[i] != labels[j]) total += lab.separation(i, j);
    }
  }
  return total;
}

Labeling exhaustive_labeling(const LabelingInstance& lab) {
  std::uint64_t count = 1;
  for (int i = 0; i < lab.nodes && count <= kEnumerationCap; ++i) count *= lab.labels();
  if (count > kEnumerationCap) {
    throw SizeCapExceeded(std::to_string(lab.labels()) + "^" + std::to_string(lab.nodes) +
                          " labelings exceed the enumeration cap");
  }
  std::vector<int> labels(lab.nodes, 0);
  Labeling best{labels, labeling_cost(lab, labels)};
  while (true) {
    int i = lab.nodes - 1;
    for (; i >= 0; --i) {
      if (++labels[i] < lab.labels()) break;
      labels[i] = 0;
    }
    if (i < 0) return best;
    Rat cost = labeling_cost(lab, labels);
    if (cost < best.cost) best = {labels, std::move(cost)};
  }
}

Assignment labeling_assignment(const LabelingInstance& lab, const std::vector<int>& labels) {
  Assignment s(lab.nodes, kNoFacility);
  for (int i = 0; i < lab.nodes; ++i) {
    if (labels[i] < lab.facility_labels) s[i] = labels[i];
  }
  return s;
}

}  // namespace ixpg
