#include "ixpg/instance.hpp"

#include "ixpg/errors.hpp"

namespace ixpg {

Instance::Instance(RatMatrix cc, RatMatrix dc, RatVector fcost)
    : cc_(std::move(cc)), dc_(std::move(dc)), fcost_(std::move(fcost)) {
  const auto n = cc_.rows();
  const auto m = cc_.cols();
  if (dc_.rows() != n || dc_.cols() != n) throw InvalidInput("dc must be n x n");
  if (fcost_.size() != m) throw InvalidInput("fcost must have one entry per facility");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      if (cc_(i, k).sign() < 0) throw InvalidInput("negative connection cost");
    }
    if (!dc_(i, i).is_zero()) throw InvalidInput("dc must have a zero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (dc_(i, j).sign() < 0) throw InvalidInput("negative disconnection cost");
      if (dc_(i, j) != dc_(j, i)) throw InvalidInput("dc must be symmetric");
    }
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    if (fcost_(k).sign() < 0) throw InvalidInput("negative facility cost");
  }
  dc_row_sum_ = dc_.rowwise().sum();
}

bool Instance::all_facility_costs_zero() const {
  for (Eigen::Index k = 0; k < fcost_.size(); ++k) {
    if (!fcost_(k).is_zero()) return false;
  }
  return true;
}

void validate(const Instance& inst, const Assignment& s) {
  if (static_cast<int>(s.size()) != inst.agents()) {
    throw InvalidInput("assignment length " + std::to_string(s.size()) + " != agent count " +
                       std::to_string(inst.agents()));
  }
  for (Strategy x : s) {
    if (x != kNoFacility && (x < 0 || x >= inst.facilities())) {
      throw InvalidInput("facility index out of range: " + std::to_string(x));
    }
  }
}

std::vector<bool> open_facilities(const Instance& inst, const Assignment& s) {
  std::vector<bool> open(inst.facilities(), false);
  for (Strategy x : s) {
    if (x != kNoFacility) open[x] = true;
  }
  return open;
}

std::vector<int> users(const Assignment& s, int facility) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    if (s[i] == facility) out.push_back(i);
  }
  return out;
}

PricingStrategy zero_prices(const Instance& inst) {
  return PricingStrategy::Constant(inst.agents(), inst.facilities(), Rat());
}

State::State(const Instance& inst, Assignment s, PricingStrategy prices)
    : s_(std::move(s)), prices_(std::move(prices)) {
  validate(inst, s_);
  if (prices_.rows() != inst.agents() || prices_.cols() != inst.facilities()) {
    throw InvalidInput("prices must be n x m");
  }
  for (int i = 0; i < inst.agents(); ++i) {
    for (int k = 0; k < inst.facilities(); ++k) {
      const int sign = prices_(i, k).sign();
      if (sign < 0) throw InvalidInput("negative price");
      if (sign > 0 && s_[i] != k) {
        throw InvalidInput("agent " + std::to_string(i + 1) + " is charged for " +
                           strategy_name(k) + " without using it");
      }
    }
  }
}

State::State(const Instance& inst, Assignment s) : State(inst, std::move(s), zero_prices(inst)) {}

Rat State::price_paid(int agent) const {
  const Strategy x = s_[agent];
  return x == kNoFacility ? Rat() : prices_(agent, x);
}

PaymentVector PaymentVector::zeros(int agents) {
  return PaymentVector{RatVector::Constant(agents, Rat())};
}

PaymentVector PaymentVector::from_peer_payments(const RatMatrix& p) {
  PaymentVector out = zeros(static_cast<int>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) out.delta(i) += p(j, i);
  }
  return out;
}

Rat PaymentVector::total() const {
  Rat t;
  for (Eigen::Index i = 0; i < delta.size(); ++i) t += delta(i);
  return t;
}

std::uint64_t instance_hash(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& text) {
    for (unsigned char ch : text) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
    h ^= ';';
    h *= 0x100000001b3ULL;
  };
  feed(std::to_string(inst.agents()));
  feed(std::to_string(inst.facilities()));
  for (int i = 0; i < inst.agents(); ++i) {
    for (int k = 0; k < inst.facilities(); ++k) feed(inst.cc(i, k).str());
  }
  for (int i = 0; i < inst.agents(); ++i) {
    for (int j = 0; j < inst.agents(); ++j) feed(inst.dc(i, j).str());
  }
  for (int k = 0; k < inst.facilities(); ++k) feed(inst.fcost(k).str());
  return h;
}

std::string strategy_name(Strategy s) {
  return s == kNoFacility ? std::string("none") : "f" + std::to_string(s + 1);
}

}  // namespace ixpg
