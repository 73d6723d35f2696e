#include <benchmark/benchmark.h>

#include "hrrxml/capacity.hpp"
#include "hrrxml/hrr.hpp"
#include "hrrxml/vsa.hpp"

namespace hrrxml {
namespace {

void BM_Bind(benchmark::State& state) {
  const Dimension d(static_cast<std::size_t>(state.range(0)));
  const auto a = sample_standard(d, RngSeed{1});
  const auto b = sample_standard(d, RngSeed{2});
  for (auto _ : state) benchmark::DoNotOptimize(bind(a, b));
}
BENCHMARK(BM_Bind)->RangeMultiplier(4)->Range(64, 4096);

void BM_SampleStandard(benchmark::State& state) {
  const Dimension d(static_cast<std::size_t>(state.range(0)));
  std::uint64_t s = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_standard(d, RngSeed{++s}));
}
BENCHMARK(BM_SampleStandard)->Arg(256)->Arg(1024);

void BM_SampleUnitary(benchmark::State& state) {
  const Dimension d(static_cast<std::size_t>(state.range(0)));
  std::uint64_t s = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_unitary(d, RngSeed{++s}));
}
BENCHMARK(BM_SampleUnitary)->Arg(256)->Arg(1024);

void BM_VsaBind(benchmark::State& state) {
  const auto kind = static_cast<VsaKind>(state.range(0));
  const Dimension d(256);
  const auto a = vsa_sample(kind, d, RngSeed{1});
  const auto b = vsa_sample(kind, d, RngSeed{2});
  state.SetLabel(std::string(to_string(kind)));
  for (auto _ : state) benchmark::DoNotOptimize(vsa_bind(kind, a, b));
}
BENCHMARK(BM_VsaBind)->DenseRange(0, 3);

void BM_RetrievalTrial(benchmark::State& state) {
  const CapacityTrialConfig cfg{VsaKind::HrrProjected, Dimension(256), static_cast<std::size_t>(state.range(0)), 1,
                                RngSeed{1}};
  for (auto _ : state) benchmark::DoNotOptimize(retrieval_error_probability(cfg));
}
BENCHMARK(BM_RetrievalTrial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hrrxml
BENCHMARK_MAIN();
