#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ixpg/instance.hpp"

namespace ixpg {

/// Dense cost tables of an instance in an arbitrary exact scalar, with the
/// per-assignment evaluations the enumerators need. Instantiated with Rat, or
/// with std::int64_t after scaling every cost by a common denominator.
template <class Scalar>
class CostKernel {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  CostKernel(Matrix cc, Matrix dc, Vector fcost)
      : cc_(std::move(cc)), dc_(std::move(dc)), fcost_(std::move(fcost)) {
    dc_total_ = dc_.rowwise().sum();
    shared_.resize(cc_.rows(), cc_.cols());
  }

  int agents() const { return static_cast<int>(cc_.rows()); }
  int facilities() const { return static_cast<int>(cc_.cols()); }

  /// Social cost = open facility costs + sum of tc. The tc sum counts every
  /// disconnected pair twice, which is the social cost convention.
  Scalar social_cost(const Assignment& s) {
    fill_shared(s);
    Scalar total(0);
    for (int k = 0; k < facilities(); ++k) {
      if (open_[k]) total += fcost_(k);
    }
    for (int i = 0; i < agents(); ++i) total += tc(i, s[i]);
    return total;
  }

  /// Q-values after social_cost() or prepare() on the same assignment.
  /// Returns nullopt for agents with no alternative (infinite Q).
  void q_values(const Assignment& s, std::vector<std::optional<Scalar>>& q) const {
    q.assign(agents(), std::nullopt);
    for (int i = 0; i < agents(); ++i) {
      const Scalar now = tc(i, s[i]);
      std::optional<Scalar> best;
      if (s[i] != kNoFacility) best = dc_total_(i);
      for (int k = 0; k < facilities(); ++k) {
        if (k == s[i] || (s[i] != kNoFacility && !open_[k])) continue;
        Scalar alt = tc(i, k);
        if (!best || alt < *best) best = std::move(alt);
      }
      if (best) q[i] = *best - now;
    }
  }

  /// Stabilizable without payments: every Q_i >= 0 and every open facility
  /// is covered by the Q-values of its users. Requires prepare().
  bool stabilizable(const Assignment& s, std::vector<std::optional<Scalar>>& q) const {
    q_values(s, q);
    for (int i = 0; i < agents(); ++i) {
      if (q[i] && *q[i] < Scalar(0)) return false;
    }
    for (int k = 0; k < facilities(); ++k) {
      if (!open_[k]) continue;
      Scalar covered(0);
      for (int i = 0; i < agents(); ++i) {
        if (s[i] == k) covered += *q[i];
      }
      if (covered < fcost_(k)) return false;
    }
    return true;
  }

  void prepare(const Assignment& s) { fill_shared(s); }

  bool is_open(int k) const { return open_[k]; }

  const Matrix& connection_costs() const { return cc_; }
  const Matrix& disconnection_costs() const { return dc_; }
  const Vector& facility_costs() const { return fcost_; }

 private:
  Scalar tc(int i, Strategy x) const {
    if (x == kNoFacility) return dc_total_(i);
    return cc_(i, x) + dc_total_(i) - shared_(i, x);
  }

  // shared_(i, k): dc from i to all users of facility k.
  void fill_shared(const Assignment& s) {
    shared_.setConstant(Scalar(0));
    open_.assign(facilities(), false);
    for (int j = 0; j < agents(); ++j) {
      if (s[j] == kNoFacility) continue;
      open_[s[j]] = true;
      shared_.col(s[j]) += dc_.col(j);
    }
  }

  Matrix cc_;
  Matrix dc_;
  Vector fcost_;
  Vector dc_total_;
  Matrix shared_;
  std::vector<bool> open_;
};

/// An integer kernel whose costs are the instance costs times `scale`.
struct ScaledKernel {
  CostKernel<std::int64_t> kernel;
  std::int64_t scale;

  Rat unscale(std::int64_t v) const { return Rat(static_cast<long>(v), static_cast<long>(scale)); }
};

/// Scales by the lcm of all denominators. Returns nullopt when a sum of
/// costs could overflow 64 bits, in which case callers fall back to Rat.
std::optional<ScaledKernel> integer_kernel(const Instance& inst);

CostKernel<Rat> rational_kernel(const Instance& inst);

}  // namespace ixpg
