#include <benchmark/benchmark.h>

#include "bevc/criteria.hpp"
#include "bevc/hilbert.hpp"
#include "bevc/optics.hpp"
#include "bevc/states.hpp"

using namespace bevc;

static void BM_BuildRho(benchmark::State& state) {
  const states::CVParams p(0.5, 0.8, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(states::build_rho(p));
}
BENCHMARK(BM_BuildRho)->Arg(8)->Arg(16)->Arg(32);

static void BM_PartialTranspose(benchmark::State& state) {
  const auto rho =
      states::build_rho(states::CVParams(0.5, 0.8, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(hilbert::partial_transpose(rho));
}
BENCHMARK(BM_PartialTranspose)->Arg(8)->Arg(16)->Arg(32);

static void BM_PptCheck(benchmark::State& state) {
  const auto rho =
      states::build_rho(states::CVParams(0.5, 0.8, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(criteria::ppt_check(rho));
}
BENCHMARK(BM_PptCheck)->Arg(8)->Arg(16)->Arg(32);

static void BM_ProductSearchChoi(benchmark::State& state) {
  const auto proj = hilbert::range_projector(
      states::build_sigma(states::AlphaFamily::choi()), 1e-12);
  criteria::SearchConfig cfg;
  cfg.restarts = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(criteria::product_in_range_search(proj, cfg));
}
BENCHMARK(BM_ProductSearchChoi)->Arg(4)->Arg(16)->Arg(64);

static void BM_ProtocolAssembly(benchmark::State& state) {
  const optics::ProtocolParams p(std::log(2.0), std::log(1.25), 8, 32);
  for (auto _ : state)
    benchmark::DoNotOptimize(optics::assemble_protocol_state(p, 10));
}
BENCHMARK(BM_ProtocolAssembly);

BENCHMARK_MAIN();
