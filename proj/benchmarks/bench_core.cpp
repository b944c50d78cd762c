#include <benchmark/benchmark.h>

#include "fhhg/direct_oracle.hpp"
#include "fhhg/floquet_solver.hpp"
#include "fhhg/observables.hpp"
#include "fhhg/self_energy.hpp"

using namespace fhhg;

namespace {

ModelParams reference() { return make_model(1.0, 2.4, 1.2, 0.1); }

void BM_SigmaClosedForm(benchmark::State& state) {
  cplx z{1.3, -0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigma_shifted(z, kTwoPi, Sheet::second));
    z += cplx(1e-9, 0.0);
  }
}
BENCHMARK(BM_SigmaClosedForm);

void BM_Dispersion(benchmark::State& state) {
  const auto p = reference();
  const cplx z{0.738, -0.149};
  const EffectiveDiagonal d(p, SheetSelector(p, z));
  for (auto _ : state) benchmark::DoNotOptimize(dispersion(d, z, {}).value);
}
BENCHMARK(BM_Dispersion);

void BM_SolveResonance(benchmark::State& state) {
  const auto p = reference();
  for (auto _ : state) benchmark::DoNotOptimize(solve_resonance(p).z);
}
BENCHMARK(BM_SolveResonance)->Unit(benchmark::kMicrosecond);

void BM_HhgSpectrum(benchmark::State& state) {
  const auto s = solve_resonance(reference());
  const auto grid = Grid1D::uniform(0.002, 6.28, static_cast<int>(state.range(0)), GridKind::momentum);
  for (auto _ : state) benchmark::DoNotOptimize(hhg_spectrum(s, grid).total.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HhgSpectrum)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

// Oracle cost per unit of simulated time (1000 steps at dt = 1e-3).
void BM_OracleEvolve(benchmark::State& state) {
  const auto s = discretize(reference(), 400.0, 8192);
  EvolveOptions o;
  o.t_end = 1.0;
  o.stride = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(s, excited_state(s), o).final_state.psi_d);
}
BENCHMARK(BM_OracleEvolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
