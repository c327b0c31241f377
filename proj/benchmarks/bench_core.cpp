#include <benchmark/benchmark.h>

#include "invlab/circuits.hpp"
#include "invlab/invariants.hpp"
#include "invlab/rng.hpp"
#include "invlab/spectrum.hpp"

using namespace invlab;

namespace {

std::vector<DensityMatrix> make_states(int dim, int count, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<DensityMatrix> states;
  for (int k = 0; k < count; ++k) states.push_back(random_ginibre_density(dim, dim, rng));
  return states;
}

void BM_Bargmann(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto states = make_states(dim, order, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bargmann(states).value);
  }
}
BENCHMARK(BM_Bargmann)->Args({4, 3})->Args({16, 5})->Args({64, 4});

void BM_CycleTestExact(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  RngStream rng(11);
  std::vector<StateInput> inputs;
  for (int k = 0; k < order; ++k) inputs.emplace_back(random_pure_state(dim, rng));
  const CircuitIR circuit = build_cycle_test(order, dim, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_exact(circuit, inputs).first);
  }
}
BENCHMARK(BM_CycleTestExact)->Args({2, 3})->Args({2, 5})->Args({4, 5})->Args({3, 6});

void BM_CycleTestDensity(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  RngStream rng(13);
  std::vector<StateInput> inputs;
  for (int k = 0; k < order; ++k) inputs.emplace_back(random_ginibre_density(dim, dim, rng));
  const CircuitIR circuit = build_cycle_test(order, dim, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_exact(circuit, inputs).first);
  }
}
BENCHMARK(BM_CycleTestDensity)->Args({2, 3})->Args({4, 3})->Args({4, 4});

void BM_SpectrumFromTraces(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  RngStream rng(17);
  const DensityMatrix rho = random_ginibre_density(dim, dim, rng);
  const auto traces = univariate_traces(rho, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum_from_traces(traces).eigenvalues[0]);
  }
}
BENCHMARK(BM_SpectrumFromTraces)->Arg(4)->Arg(8)->Arg(12);

void BM_ShotSampling(benchmark::State& state) {
  RngStream rng(19);
  std::vector<StateInput> inputs{random_pure_state(2, rng), random_pure_state(2, rng),
                                 random_pure_state(2, rng)};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_invariant(inputs, 1000000, seed++));
  }
}
BENCHMARK(BM_ShotSampling);

}  // namespace

BENCHMARK_MAIN();
