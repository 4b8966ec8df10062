#include <benchmark/benchmark.h>

#include "sphbm/calculus.hpp"
#include "sphbm/kernels.hpp"
#include "sphbm/sphere_grid.hpp"
#include "sphbm/spherical_function.hpp"

namespace {

sphbm::Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? sphbm::Exec::serial : sphbm::Exec::parallel;
}

void BM_MapNodes(benchmark::State& state) {
  const auto grid = sphbm::build_grid(static_cast<int>(state.range(0)));
  const auto f = sphbm::builtin("exp_bump");
  for (auto _ : state) {
    auto v = sphbm::map_nodes(grid.rule.nodes, [&](const sphbm::Vec3& u) { return f(u); }, exec_of(state));
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}

void BM_JetField(benchmark::State& state) {
  const auto grid = sphbm::build_grid(static_cast<int>(state.range(0)));
  const auto f = sphbm::builtin("shifted_ellipsoid");
  for (auto _ : state) {
    auto jets = sphbm::jet_field(f, grid.rule, sphbm::FdOptions{}, exec_of(state));
    benchmark::DoNotOptimize(jets.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}

}  // namespace

BENCHMARK(BM_MapNodes)->ArgsProduct({{3, 5, 6}, {0, 1}});
BENCHMARK(BM_JetField)->ArgsProduct({{3, 5}, {0, 1}});
BENCHMARK_MAIN();
