#include <benchmark/benchmark.h>

#include "kinshock/canonical.hpp"
#include "kinshock/chapman_enskog.hpp"
#include "kinshock/manifolds.hpp"
#include "kinshock/presets.hpp"
#include "kinshock/resolvent.hpp"

namespace {

using namespace kinshock;

void BM_ResolventApply(benchmark::State& state) {
  const auto model = make_preset("demo-m0");
  const auto canon = reduce_to_canonical(model);
  const auto decomp = spectral_decompose(canon.Gamma0);
  const int nn = static_cast<int>(state.range(0));
  GridFunction g = make_grid(-10.0, 10.0, nn, decomp.dim());
  Rng rng(3);
  for (int i = 0; i < nn; ++i) g.values.col(i) = rng.gaussian_vector(decomp.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_resolvent(decomp, g));
  }
  state.SetItemsProcessed(state.iterations() * nn);
}
BENCHMARK(BM_ResolventApply)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void BM_CenterTaylor(benchmark::State& state) {
  const auto model = make_preset("demo-m1");
  const auto canon = reduce_to_canonical(model);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(center_taylor(canon, k));
  }
}
BENCHMARK(BM_CenterTaylor)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void BM_EquilibriumGraph(benchmark::State& state) {
  const auto model = make_preset("boltz-like");
  const auto ced = make_chapman_enskog(model);
  Rng rng(11);
  const Vector du = 0.1 * ced.basin_radius * rng.unit_vector(ced.r());
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_equilibrium_graph(ced, ced.u_bar_macro + du));
  }
}
BENCHMARK(BM_EquilibriumGraph);

void BM_CanonicalReduce(benchmark::State& state) {
  const auto model = make_preset("boltz-like");
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce_to_canonical(model));
  }
}
BENCHMARK(BM_CanonicalReduce);

}  // namespace

BENCHMARK_MAIN();
