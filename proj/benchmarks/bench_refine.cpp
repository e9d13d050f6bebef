#include <benchmark/benchmark.h>

#include <coref/encoding.hpp>
#include <coref/generator.hpp>
#include <coref/refiner.hpp>

namespace {

coref::Encoding make_input(const char* functor, std::size_t states, double density) {
  coref::GeneratorOptions options;
  options.functor = functor;
  options.states = states;
  options.density = density;
  options.seed = 7;
  return coref::parse_coalgebra(coref::generate_coalgebra(options));
}

void BM_refine_lts(benchmark::State& state) {
  const auto enc = make_input("P({a,b} x X)", static_cast<std::size_t>(state.range(0)), 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(coref::refine(enc));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_refine_lts)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Complexity();

void BM_refine_markov(benchmark::State& state) {
  const auto enc = make_input("R(X)", static_cast<std::size_t>(state.range(0)), 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(coref::refine(enc));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_refine_markov)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Complexity();

void BM_refine_segala(benchmark::State& state) {
  const auto enc = make_input("P({a} x D(X))", static_cast<std::size_t>(state.range(0)), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(coref::refine(enc));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_refine_segala)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Complexity();

}  // namespace

BENCHMARK_MAIN();
