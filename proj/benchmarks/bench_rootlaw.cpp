#include <benchmark/benchmark.h>

#include "rootlaw/calculus.hpp"
#include "rootlaw/ensembles.hpp"
#include "rootlaw/experiments.hpp"
#include "rootlaw/limits.hpp"
#include "rootlaw/rootfind.hpp"

namespace {

using namespace rootlaw;

void BM_FindRootsKac(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto poly = sample_polynomial(make_log_coeffs(EnsembleKind::kKac, n), SamplerSpec{}, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(find_roots(poly));
  state.SetComplexityN(n);
}
BENCHMARK(BM_FindRootsKac)->RangeMultiplier(2)->Range(64, 2048)->Unit(benchmark::kMillisecond)->Complexity();

// Half-order derivative of the elliptic ensemble: coefficients span hundreds of nats.
void BM_FindRootsEllipticDerivative(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto coeffs = differentiate(make_log_coeffs(EnsembleKind::kElliptic, n), DerivativePlan(n, n / 2));
  const auto poly = sample_polynomial(coeffs, SamplerSpec{}, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(find_roots(poly));
}
BENCHMARK(BM_FindRootsEllipticDerivative)->Arg(800)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_LegendreFenchelDefaultGrid(benchmark::State& state) {
  const auto profile = make_profile(ProfileKind::kElliptic);
  const auto grid = default_s_grid();
  const int resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(legendre_fenchel(profile, grid, resolution));
}
BENCHMARK(BM_LegendreFenchelDefaultGrid)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SamplePolynomial(benchmark::State& state) {
  const auto coeffs = make_log_coeffs(EnsembleKind::kKac, 4000);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_polynomial(coeffs, SamplerSpec{}, 7, trial++));
}
BENCHMARK(BM_SamplePolynomial);

void BM_RunTrialsKacHalf(benchmark::State& state) {
  ExperimentConfig config;
  config.n = 400;
  config.rule = {DerivativeRule::Kind::kRatio, 0.5};
  config.trials = 4;
  config.target = "kac-a:0.5";
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(config));
}
BENCHMARK(BM_RunTrialsKacHalf)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
