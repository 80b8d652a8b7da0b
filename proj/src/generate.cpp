#include "ixpg/generate.hpp"

#include "ixpg/errors.hpp"

namespace ixpg {

namespace {

void check_range(int lo, int hi, const char* what) {
  if (lo < 0 || hi < lo) throw InvalidInput(std::string("invalid ") + what + " range");
}

}  // namespace

Instance random_instance(const GeneratorParams& params) {
  std::mt19937_64 rng(params.seed);
  return random_instance(params, rng);
}

Instance random_instance(const GeneratorParams& p, std::mt19937_64& rng) {
  if (p.agents < 1 || p.facilities < 1) throw InvalidInput("need at least one agent and facility");
  check_range(p.cc_min, p.cc_max, "cc");
  check_range(p.dc_min, p.dc_max, "dc");
  check_range(p.fcost_min, p.fcost_max, "fcost");
  if (!(p.density >= 0.0 && p.density <= 1.0)) throw InvalidInput("density must lie in [0, 1]");

  std::uniform_int_distribution<int> cc_dist(p.cc_min, p.cc_max);
  std::uniform_int_distribution<int> dc_dist(p.dc_min, p.dc_max);
  std::uniform_int_distribution<int> f_dist(p.fcost_min, p.fcost_max);
  std::bernoulli_distribution edge(p.density);

  RatMatrix cc(p.agents, p.facilities);
  for (int i = 0; i < p.agents; ++i) {
    for (int k = 0; k < p.facilities; ++k) cc(i, k) = cc_dist(rng);
  }
  RatMatrix dc = RatMatrix::Constant(p.agents, p.agents, Rat());
  for (int i = 0; i < p.agents; ++i) {
    for (int j = i + 1; j < p.agents; ++j) {
      if (edge(rng)) dc(i, j) = dc(j, i) = dc_dist(rng);
    }
  }
  RatVector fcost(p.facilities);
  for (int k = 0; k < p.facilities; ++k) fcost(k) = f_dist(rng);
  return Instance(std::move(cc), std::move(dc), std::move(fcost));
}

Instance pos_fixture(const Rat& eps) {
  if (eps.sign() < 0) throw InvalidInput("eps must be non-negative");
  return make_instance({{0}, {Rat(1) + eps}}, {{0, 1}, {1, 0}}, {0});
}

Instance poa_fixture() { return make_instance({{0}, {0}}, {{0, 1}, {1, 0}}, {0}); }

Instance make_instance(const std::vector<std::vector<Rat>>& cc,
                       const std::vector<std::vector<Rat>>& dc, const std::vector<Rat>& fcost) {
  const int n = static_cast<int>(cc.size());
  const int m = static_cast<int>(fcost.size());
  RatMatrix ccm(n, m);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(cc[i].size()) != m) throw InvalidInput("cc row length != facility count");
    for (int k = 0; k < m; ++k) ccm(i, k) = cc[i][k];
  }
  if (static_cast<int>(dc.size()) != n) throw InvalidInput("dc must be n x n");
  RatMatrix dcm(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(dc[i].size()) != n) throw InvalidInput("dc must be n x n");
    for (int j = 0; j < n; ++j) dcm(i, j) = dc[i][j];
  }
  RatVector f(m);
  for (int k = 0; k < m; ++k) f(k) = fcost[k];
  return Instance(std::move(ccm), std::move(dcm), std::move(f));
}

}  // namespace ixpg
