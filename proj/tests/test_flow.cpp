#include <doctest.h>

#include <random>

#include "ixpg/flow.hpp"
#include "ixpg/rational.hpp"

using namespace ixpg;

namespace {

using Net = FlowNetwork<Rat>;

// Minimum s-t cut by trying every node subset that contains s but not t.
Rat min_cut_by_enumeration(const Net& net, int s, int t) {
  const int n = net.nodes();
  std::optional<Rat> best;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (!(mask >> s & 1) || (mask >> t & 1)) continue;
    Rat cut;
    bool infinite = false;
    for (const auto& a : net.arcs()) {
      if ((mask >> a.from & 1) && !(mask >> a.to & 1)) {
        if (!a.capacity) infinite = true;
        else cut += *a.capacity;
      }
    }
    if (!infinite && (!best || cut < *best)) best = cut;
  }
  return *best;
}

void check_conservation(const Net& net, const std::vector<Rat>& flow, int s, int t) {
  std::vector<Rat> excess(net.nodes());
  for (std::size_t e = 0; e < flow.size(); ++e) {
    const auto& a = net.arcs()[e];
    CHECK(flow[e] >= Rat(0));
    if (a.capacity) CHECK(flow[e] <= *a.capacity);
    excess[a.to] += flow[e];
    excess[a.from] -= flow[e];
  }
  for (int v = 0; v < net.nodes(); ++v) {
    if (v != s && v != t) CHECK(excess[v].is_zero());
  }
}

}  // namespace

TEST_CASE("max flow examples") {
  Net single(2);
  single.add_arc(0, 1, Rat(5));
  CHECK(max_flow(single, 0, 1).value == Rat(5));

  Net diamond(4);  // s=0, a=1, b=2, t=3
  diamond.add_arc(0, 1, Rat(3));
  diamond.add_arc(0, 2, Rat(2));
  diamond.add_arc(1, 3, Rat(2));
  diamond.add_arc(2, 3, Rat(3));
  const auto res = max_flow(diamond, 0, 3);
  CHECK(res.value == Rat(4));
  check_conservation(diamond, res.flow, 0, 3);

  Net apart(2);
  CHECK(max_flow(apart, 0, 1).value == Rat(0));
}

TEST_CASE("uncapacitated arcs are markers, not big numbers") {
  Net net(3);
  net.add_uncapacitated_arc(0, 1);
  net.add_arc(1, 2, Rat(7, 3));
  CHECK(max_flow(net, 0, 2).value == Rat(7, 3));

  Net open(2);
  open.add_uncapacitated_arc(0, 1);
  CHECK_THROWS_AS(max_flow(open, 0, 1), std::domain_error);
  CHECK_THROWS_AS(net.add_arc(0, 2, Rat(-1)), InvalidInput);
}

TEST_CASE("circulation examples") {
  Net ok(2);
  ok.set_supply(0, Rat(1));
  ok.set_supply(1, Rat(-1));
  ok.add_arc(0, 1, Rat(1));
  const auto feasible = feasible_circulation(ok);
  CHECK(feasible.feasible);
  CHECK(feasible.flow[0] == Rat(1));

  Net tight(2);
  tight.set_supply(0, Rat(1));
  tight.set_supply(1, Rat(-1));
  tight.add_arc(0, 1, Rat(1, 2));
  const auto infeasible = feasible_circulation(tight);
  CHECK_FALSE(infeasible.feasible);
  CHECK(infeasible.violating_set == std::vector<int>{1});

  Net unbalanced(1);
  unbalanced.set_supply(0, Rat(1));
  CHECK_THROWS_AS(feasible_circulation(unbalanced), InvalidInput);
}

TEST_CASE("max flow equals the enumerated min cut on small networks") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 400; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    Net net(n);
    std::bernoulli_distribution arc(0.35), unbounded(0.1);
    std::uniform_int_distribution<int> cap(0, 12);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v || !arc(rng)) continue;
        // Keep uncapacitated arcs away from the source so the flow is finite.
        if (u != 0 && unbounded(rng)) net.add_uncapacitated_arc(u, v);
        else net.add_arc(u, v, Rat(cap(rng), 1 + cap(rng) % 3));
      }
    }
    const int s = 0;
    const int sink = n - 1;
    const auto res = max_flow(net, s, sink);
    CHECK(res.value == min_cut_by_enumeration(net, s, sink));
    check_conservation(net, res.flow, s, sink);
  }
}

TEST_CASE("infeasible circulations come with a violated subset") {
  std::mt19937_64 rng(77);
  int infeasible = 0;
  for (int t = 0; t < 400; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 7)(rng);
    Net net(n);
    std::uniform_int_distribution<int> amount(-4, 4), cap(0, 4);
    Rat balance;
    for (int v = 0; v + 1 < n; ++v) {
      net.set_supply(v, Rat(amount(rng)));
      balance += net.supply(v);
    }
    net.set_supply(n - 1, -balance);
    std::bernoulli_distribution arc(0.4);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v && arc(rng)) net.add_arc(u, v, Rat(cap(rng)));
      }
    }
    const auto res = feasible_circulation(net);
    if (res.feasible) {
      std::vector<Rat> excess(n);
      for (std::size_t e = 0; e < res.flow.size(); ++e) {
        excess[net.arcs()[e].from] += res.flow[e];
        excess[net.arcs()[e].to] -= res.flow[e];
      }
      for (int v = 0; v < n; ++v) CHECK(excess[v] == net.supply(v));
      continue;
    }
    ++infeasible;
    std::vector<bool> in_b(n, false);
    for (int v : res.violating_set) in_b[v] = true;
    Rat slack;
    for (int v : res.violating_set) slack += net.supply(v);
    for (const auto& a : net.arcs()) {
      if (!in_b[a.from] && in_b[a.to]) slack += *a.capacity;
    }
    CHECK(slack < Rat(0));
  }
  CHECK(infeasible > 20);
}
