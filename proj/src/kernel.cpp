#include "ixpg/kernel.hpp"

namespace ixpg {

namespace {

// Every evaluated quantity is bounded by twice the sum of all costs.
const mpz_class kLimit = mpz_class(1) << 60;

}  // namespace

std::optional<ScaledKernel> integer_kernel(const Instance& inst) {
  const int n = inst.agents();
  const int m = inst.facilities();

  mpz_class scale = 1;
  mpq_class total = 0;
  auto visit = [&](const Rat& v) {
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.gmp().get_den_mpz_t());
    total += v.gmp();
  };
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) visit(inst.cc(i, k));
    for (int j = 0; j < n; ++j) visit(inst.dc(i, j));
  }
  for (int k = 0; k < m; ++k) visit(inst.fcost(k));

  const mpq_class bound = 2 * total * scale;
  if (scale >= kLimit || bound >= kLimit) return std::nullopt;

  auto scaled = [&](const Rat& v) {
    const mpz_class z = v.gmp().get_num() * (scale / v.gmp().get_den());
    return static_cast<std::int64_t>(z.get_si());
  };
  CostKernel<std::int64_t>::Matrix cc(n, m), dc(n, n);
  CostKernel<std::int64_t>::Vector f(m);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) cc(i, k) = scaled(inst.cc(i, k));
    for (int j = 0; j < n; ++j) dc(i, j) = scaled(inst.dc(i, j));
  }
  for (int k = 0; k < m; ++k) f(k) = scaled(inst.fcost(k));
  return ScaledKernel{CostKernel<std::int64_t>(std::move(cc), std::move(dc), std::move(f)),
                      static_cast<std::int64_t>(scale.get_si())};
}

CostKernel<Rat> rational_kernel(const Instance& inst) {
  return CostKernel<Rat>(inst.connection_costs(), inst.disconnection_costs(),
                         inst.facility_costs());
}

}  // namespace ixpg
