#include <benchmark/benchmark.h>

#include "wigner_align/energy.hpp"
#include "wigner_align/model.hpp"
#include "wigner_align/solvers.hpp"

namespace {

using namespace wigner_align;

Instance make(std::size_t n, double rho, PlantedMode mode = PlantedMode::kUniform) {
  return sample_instance(n, rho, {2024, n}, mode, false);
}

void BM_SwapDeltaScanDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance inst = make(n, 0.3);
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j) acc += swap_delta(inst.planted, i, j, inst.A, inst.B, inst.rho);
    benchmark::DoNotOptimize(acc);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SwapDeltaScanDirect)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed);

void BM_SwapDeltaScanBatched(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance inst = make(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(all_swap_deltas(inst.planted, inst.A, inst.B, inst.rho));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SwapDeltaScanBatched)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNCubed);

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  GaussianSource src(7);
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = src.normal();
  const AssignmentProblem p{c, Sense::kMinimize};
  for (auto _ : state) benchmark::DoNotOptimize(hungarian(p).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_BruteForce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance inst = make(n, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_map(inst.A, inst.B, inst.rho).ties);
}
BENCHMARK(BM_BruteForce)->DenseRange(6, 8)->Unit(benchmark::kMillisecond);

void BM_SpectralAlign(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance inst = make(n, 0.99);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_align(inst.A, inst.B, inst.rho).objective);
}
BENCHMARK(BM_SpectralAlign)->RangeMultiplier(2)->Range(50, 200)->Unit(benchmark::kMillisecond);

void BM_TranspositionDescent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance inst = make(n, 0.99);
  const Permutation start = spectral_align(inst.A, inst.B, inst.rho).pi_hat;
  for (auto _ : state) benchmark::DoNotOptimize(transposition_descent(inst.A, inst.B, inst.rho, start).objective);
}
BENCHMARK(BM_TranspositionDescent)->RangeMultiplier(2)->Range(50, 200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
