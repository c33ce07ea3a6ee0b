#include <benchmark/benchmark.h>

#include "swh/coefficients.hpp"
#include "swh/gci.hpp"
#include "swh/particles.hpp"
#include "swh/phase.hpp"

namespace {

swh::EquilibriumSpec quartic_spec() {
  return {2, 0.2, 0.6928089506517911, swh::quartic_potential(1.0, 1.0)};
}

void BM_PartitionZ(benchmark::State& state) {
  swh::EquilibriumSpec spec = quartic_spec();
  swh::QuadratureRule rule = swh::make_rule(spec);
  for (auto _ : state) benchmark::DoNotOptimize(swh::Z(spec, rule));
}
BENCHMARK(BM_PartitionZ)->Unit(benchmark::kMillisecond);

void BM_PressureTensor(benchmark::State& state) {
  swh::EquilibriumSpec spec = quartic_spec();
  swh::QuadratureRule rule = swh::make_rule(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(swh::pressure_tensor(spec, rule));
}
BENCHMARK(BM_PressureTensor)->Unit(benchmark::kMillisecond);

void BM_FindLStar(benchmark::State& state) {
  swh::RadialPotential pot = swh::quartic_potential(1.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(swh::find_l_star(2, 0.2, pot));
}
BENCHMARK(BM_FindLStar)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_GciSolve(benchmark::State& state) {
  swh::EquilibriumSpec spec = quartic_spec();
  int n = static_cast<int>(state.range(0));
  swh::Mesh2D mesh = swh::make_mesh(spec, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(swh::solve_chi(spec, mesh));
}
BENCHMARK(BM_GciSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SampleEquilibrium(benchmark::State& state) {
  swh::EquilibriumSpec spec = quartic_spec();
  for (auto _ : state)
    benchmark::DoNotOptimize(swh::sample_equilibrium(spec, 10000, 1));
}
BENCHMARK(BM_SampleEquilibrium)->Unit(benchmark::kMillisecond);

void BM_ParticleStep(benchmark::State& state) {
  swh::EquilibriumSpec spec = quartic_spec();
  std::vector<double> v =
      swh::sample_equilibrium(spec, 10000, 2).velocities;
  swh::ParticleEnsemble ens =
      swh::make_ensemble(2, spec.sigma, spec.pot, std::move(v), 1e-3, 3);
  for (auto _ : state) swh::step(ens);
}
BENCHMARK(BM_ParticleStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
