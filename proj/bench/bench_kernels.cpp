#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cbrn/kernels.hpp"
#include "cbrn/pattern.hpp"

namespace k = cbrn::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Dimension range: one 116x116 pattern up to a 464x464 one.
void dims(benchmark::internal::Benchmark* b) {
  for (long side : {116L, 232L, 464L}) b->Arg(side * side);
}

template <double (*Dot)(std::span<const double>, std::span<const double>)>
void BM_Dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(n, 1), b = random_vector(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Dot(a, b));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * n * 2 * sizeof(double)));
}

// Cue outputs of a 7-neuron ball.
template <void (*Matvec)(std::span<const double>, std::span<const double>, std::span<double>)>
void BM_Matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rows = random_vector(7 * n, 3), x = random_vector(n, 4);
  std::vector<double> out(7);
  for (auto _ : state) {
    Matvec(rows, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * 8 * n * sizeof(double)));
}

template <k::StepStats (*Axpy)(double, std::span<const double>, std::span<double>)>
void BM_Axpy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vector(n, 5);
  auto y = random_vector(n, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Axpy(1e-9, x, y));
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * n * 3 * sizeof(double)));
}

template <k::StepStats (*Relax)(std::span<double>, std::span<const double>, double)>
void BM_Relax(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto target = random_vector(n, 7);
  auto w = random_vector(n, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Relax(w, target, 0.5));
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * n * 3 * sizeof(double)));
}

}  // namespace

BENCHMARK(BM_Dot<k::serial::dot>)->Name("dot/serial")->Apply(dims);
BENCHMARK(BM_Dot<k::parallel::dot>)->Name("dot/parallel")->Apply(dims)->UseRealTime();
BENCHMARK(BM_Matvec<k::serial::matvec>)->Name("matvec7/serial")->Apply(dims);
BENCHMARK(BM_Matvec<k::parallel::matvec>)->Name("matvec7/parallel")->Apply(dims)->UseRealTime();
BENCHMARK(BM_Axpy<k::serial::axpy>)->Name("axpy/serial")->Apply(dims);
BENCHMARK(BM_Axpy<k::parallel::axpy>)->Name("axpy/parallel")->Apply(dims)->UseRealTime();
BENCHMARK(BM_Relax<k::serial::relax>)->Name("relax/serial")->Apply(dims);
BENCHMARK(BM_Relax<k::parallel::relax>)->Name("relax/parallel")->Apply(dims)->UseRealTime();

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::AddCustomContext("threads", std::to_string(k::thread_count()));
  benchmark::AddCustomContext("pattern_dim", std::to_string(cbrn::kDefaultDim));
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
