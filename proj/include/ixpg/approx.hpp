#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ixpg/lp.hpp"
#include "ixpg/multi.hpp"

namespace ixpg {

/// Variable numbering of the relaxation: x_ik, then x_ij for unordered pairs
/// i < j, then x_ijk, then x_k.
struct RelaxationLayout {
  int n = 0;
  int m = 0;

  int pairs() const { return n * (n - 1) / 2; }
  int pair_index(int i, int j) const;
  int x_ik(int i, int k) const { return i * m + k; }
  int x_ij(int i, int j) const { return n * m + pair_index(i, j); }
  int x_ijk(int i, int j, int k) const { return n * m + pairs() + pair_index(i, j) * m + k; }
  int x_k(int k) const { return n * m + pairs() * (m + 1) + k; }
  int variables() const { return n * m + pairs() * (m + 1) + m; }
};

struct Relaxation {
  RelaxationLayout layout;
  LinearProgram program;
};

/// minimize sum w_ik x_ik + 2 sum w_ij x_ij + sum c(f_k) x_k subject to
/// x_ijk <= x_ik, x_ijk <= x_jk, 1 - x_ij <= sum_k x_ijk, x_k >= x_ik, all in [0, 1].
Relaxation build_relaxation(const Instance& inst);

struct LpSolution {
  RelaxationLayout layout;
  Eigen::VectorXd values;
  double objective = 0;
};

/// Solves the relaxation; throws std::logic_error if the solver reports it
/// infeasible (it never is: x = 0, x_ij = 1 satisfies every row).
LpSolution solve_relaxation(const Instance& inst);

/// A 0/1 point of the integer program with its exact objective and the
/// multi-facility assignment s_i = {f_k : x_ik = 1} it encodes.
struct IntegralSolution {
  RelaxationLayout layout;
  Eigen::VectorXi values;
  Rat objective;
  MultiAssignment assignment;
};

/// Integrality plus all four constraint families, checked exactly.
bool ip_feasible(const IntegralSolution& sol);

Rat ip_objective(const Instance& inst, const RelaxationLayout& layout, const Eigen::VectorXi& x);

/// x_ik = 1 iff x*_ik >= 1/(m+1) (within the LP tolerance); the other
/// variables follow from x_ik.
IntegralSolution round_deterministic(const LpSolution& lp, const Instance& inst);

/// One run of the correlated rounding: a single U_k per facility, x_ik = 1
/// iff U_k <= x*_ik, with the dependent variables filled in.
Eigen::VectorXi randomized_run(const LpSolution& lp, std::mt19937_64& rng);

/// ceil(4 ln(10 n)).
int randomized_runs(int agents);

struct RandomizedRounding {
  IntegralSolution solution;
  std::uint64_t seed = 0;
  int runs = 0;
};

/// Each run draws one U_k per facility and sets x_ik = 1 iff U_k <= x*_ik,
/// so P[x_ik = 1] = x*_ik and agents with larger x*_ik are rounded up
/// whenever smaller ones are. x_ik is 1 if set in any run; x_ij is 1 only if
/// the pair shared nothing in every run.
RandomizedRounding round_randomized(const LpSolution& lp, const Instance& inst, std::uint64_t seed);

/// Lossy single-facility view: each agent keeps its cheapest used facility
/// (ties to the lowest index), or nothing.
Assignment project_single(const Instance& inst, const MultiAssignment& s);

/// Labels 0..m-1 are the facilities; label m + i is agent i's personal label.
struct LabelingInstance {
  int nodes = 0;
  int facility_labels = 0;
  RatMatrix label_cost;   // nodes x (facility_labels + nodes)
  RatMatrix separation;   // 2 dc(i, j)
  Rat big_m;              // personal-label cost for other agents

  int labels() const { return facility_labels + nodes; }
};

/// Throws InvalidInput if any facility has a nonzero opening cost.
LabelingInstance to_uniform_labeling(const Instance& inst);

struct Labeling {
  std::vector<int> labels;
  Rat cost;
};

Rat labeling_cost(const LabelingInstance& lab, const std::vector<int>& labels);

/// Exhaustive search; throws SizeCapExceeded when labels^nodes exceeds the
/// enumeration cap.
Labeling exhaustive_labeling(const LabelingInstance& lab);

/// Facility labels map to that facility, personal labels to no facility.
Assignment labeling_assignment(const LabelingInstance& lab, const std::vector<int>& labels);

}  // namespace ixpg
