#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ixpg/errors.hpp"

namespace ixpg {

/// Directed network with optional node supplies. Positive supply is a source
/// of flow, negative supply is a demand. Capacities are non-negative; an arc
/// without a capacity is uncapacitated.
template <class Scalar>
class FlowNetwork {
 public:
  struct Arc {
    int from;
    int to;
    std::optional<Scalar> capacity;  // nullopt: uncapacitated
  };

  FlowNetwork() = default;
  explicit FlowNetwork(int nodes) : supply_(nodes, Scalar(0)) {}

  int add_node(Scalar supply = Scalar(0)) {
    supply_.push_back(std::move(supply));
    return nodes() - 1;
  }

  int add_arc(int from, int to, Scalar capacity) {
    if (capacity < Scalar(0)) throw InvalidInput("negative arc capacity");
    return push_arc(from, to, std::move(capacity));
  }

  int add_uncapacitated_arc(int from, int to) { return push_arc(from, to, std::nullopt); }

  void set_supply(int node, Scalar supply) { supply_.at(node) = std::move(supply); }

  int nodes() const { return static_cast<int>(supply_.size()); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Scalar& supply(int node) const { return supply_[node]; }

 private:
  int push_arc(int from, int to, std::optional<Scalar> capacity) {
    if (from < 0 || to < 0 || from >= nodes() || to >= nodes()) {
      throw InvalidInput("arc endpoint out of range");
    }
    arcs_.push_back(Arc{from, to, std::move(capacity)});
    return static_cast<int>(arcs_.size()) - 1;
  }

  std::vector<Scalar> supply_;
  std::vector<Arc> arcs_;
};

template <class Scalar>
struct MaxFlowResult {
  Scalar value;
  std::vector<Scalar> flow;       // per arc of the input network
  std::vector<bool> source_side;  // residual reachability from the source: a minimum cut
};

template <class Scalar>
struct CirculationResult {
  bool feasible = false;
  std::vector<Scalar> flow;  // per arc; meaningful when feasible
  /// When infeasible: a node subset B whose supply plus inbound capacity is
  /// negative, which certifies that no feasible circulation exists.
  std::vector<int> violating_set;
};

namespace detail {

// Dinic's blocking-flow algorithm on a residual graph. Residual capacities
// use nullopt for "unbounded" so uncapacitated arcs never turn into a big-M.
template <class Scalar>
class Dinic {
 public:
  using Cap = std::optional<Scalar>;

  explicit Dinic(int n) : adj_(n), level_(n), next_(n) {}

  int add_edge(int from, int to, Cap cap) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({to, std::move(cap), Scalar(0)});
    edges_.push_back({from, Cap(Scalar(0)), Scalar(0)});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  Scalar run(int source, int sink) {
    if (source == sink) throw InvalidInput("source and sink coincide");
    Scalar total(0);
    while (bfs(source, sink)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        Cap pushed = dfs(source, sink, std::nullopt);
        if (!pushed) throw std::domain_error("unbounded flow: uncapacitated source-sink path");
        if (*pushed == Scalar(0)) break;
        total += *pushed;
      }
    }
    return total;
  }

  const Scalar& flow(int edge_id) const { return edges_[edge_id].flow; }

  std::vector<bool> reachable(int source) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<int> queue{source};
    seen[source] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int id : adj_[v]) {
        const auto& e = edges_[id];
        if (!seen[e.to] && has_residual(e)) {
          seen[e.to] = true;
          queue.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    int to;
    Cap cap;  // residual capacity
    Scalar flow;
  };

  static bool has_residual(const Edge& e) { return !e.cap || *e.cap > Scalar(0); }

  bool bfs(int source, int sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<int> queue{source};
    level_[source] = 0;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int id : adj_[v]) {
        const auto& e = edges_[id];
        if (level_[e.to] < 0 && has_residual(e)) {
          level_[e.to] = level_[v] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  static Cap cap_min(const Cap& a, const Cap& b) {
    if (!a) return b;
    if (!b) return a;
    return *b < *a ? b : a;
  }

  // Returns the amount pushed (zero when blocked); nullopt signals an
  // unbounded augmenting path.
  Cap dfs(int v, int sink, Cap limit) {
    if (v == sink) return limit;
    for (int& i = next_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      const int id = adj_[v][i];
      Edge& e = edges_[id];
      if (level_[e.to] != level_[v] + 1 || !has_residual(e)) continue;
      Cap pushed = dfs(e.to, sink, cap_min(limit, e.cap));
      if (!pushed) return std::nullopt;
      if (*pushed > Scalar(0)) {
        augment(id, *pushed);
        return pushed;
      }
    }
    return Cap(Scalar(0));
  }

  void augment(int id, const Scalar& amount) {
    Edge& fwd = edges_[id];
    Edge& rev = edges_[id ^ 1];
    if (fwd.cap) *fwd.cap -= amount;
    if (rev.cap) *rev.cap += amount;
    // Flow is tracked on even (forward) edges only.
    if ((id & 1) == 0) {
      fwd.flow += amount;
    } else {
      rev.flow -= amount;
    }
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<int> next_;
};

}  // namespace detail

/// Maximum source-sink flow. Supplies of `net` are ignored. Throws
/// std::domain_error when an uncapacitated path joins source and sink.
template <class Scalar>
MaxFlowResult<Scalar> max_flow(const FlowNetwork<Scalar>& net, int source, int sink) {
  detail::Dinic<Scalar> dinic(net.nodes());
  std::vector<int> ids;
  ids.reserve(net.arcs().size());
  for (const auto& a : net.arcs()) ids.push_back(dinic.add_edge(a.from, a.to, a.capacity));

  MaxFlowResult<Scalar> result{dinic.run(source, sink), {}, dinic.reachable(source)};
  result.flow.reserve(ids.size());
  for (int id : ids) result.flow.push_back(dinic.flow(id));
  return result;
}

/// Feasibility of a circulation with supplies and demands. Standard
/// reduction: a super source feeds every supply node, every demand node
/// drains into a super sink, and the circulation is feasible iff the maximum
/// flow saturates all supply. Throws InvalidInput if supplies do not sum to 0.
template <class Scalar>
CirculationResult<Scalar> feasible_circulation(const FlowNetwork<Scalar>& net) {
  Scalar balance(0);
  for (int v = 0; v < net.nodes(); ++v) balance += net.supply(v);
  if (!(balance == Scalar(0))) throw InvalidInput("supplies must sum to zero");

  const int n = net.nodes();
  const int source = n;
  const int sink = n + 1;
  detail::Dinic<Scalar> dinic(n + 2);
  std::vector<int> ids;
  ids.reserve(net.arcs().size());
  for (const auto& a : net.arcs()) ids.push_back(dinic.add_edge(a.from, a.to, a.capacity));

  Scalar required(0);
  for (int v = 0; v < n; ++v) {
    const Scalar& b = net.supply(v);
    if (b > Scalar(0)) {
      dinic.add_edge(source, v, b);
      required += b;
    } else if (b < Scalar(0)) {
      dinic.add_edge(v, sink, Scalar(0) - b);
    }
  }

  CirculationResult<Scalar> result;
  const Scalar value = dinic.run(source, sink);
  result.feasible = value == required;
  result.flow.reserve(ids.size());
  for (int id : ids) result.flow.push_back(dinic.flow(id));
  if (!result.feasible) {
    const auto seen = dinic.reachable(source);
    for (int v = 0; v < n; ++v) {
      if (!seen[v]) result.violating_set.push_back(v);
    }
  }
  return result;
}

}  // namespace ixpg
