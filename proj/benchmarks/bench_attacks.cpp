#include <benchmark/benchmark.h>

#include "chaosbreak/chain.hpp"
#include "chaosbreak/isbda.hpp"
#include "chaosbreak/rng.hpp"
#include "chaosbreak/testdata.hpp"

using namespace chaosbreak;

namespace {

void BM_isbda_attack(benchmark::State& state) {
    Rng rng(11);
    const std::size_t side = static_cast<std::size_t>(state.range(0));
    const auto pipe = random_pndcc(rng, StagePattern("PDP"), side * side, 1);
    for (auto _ : state) {
        AttackOracle oracle(pipe, side, side);
        benchmark::DoNotOptimize(isbda_attack(oracle, side, side));
    }
}
BENCHMARK(BM_isbda_attack)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_chain_attack(benchmark::State& state) {
    Rng rng(12);
    const std::size_t side = static_cast<std::size_t>(state.range(0));
    const auto pipe = random_pndcc(rng, StagePattern("PDPDP"), side * side, 1);
    for (auto _ : state) {
        AttackOracle oracle(pipe, side, side);
        benchmark::DoNotOptimize(chain_attack(oracle, StagePattern("PDPDP"), side, side));
    }
}
BENCHMARK(BM_chain_attack)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_association_extraction(benchmark::State& state) {
    Rng rng(13);
    const std::size_t side = static_cast<std::size_t>(state.range(0));
    const auto pipe = random_pndcc(rng, StagePattern("PDPDP"), side * side, 1);
    for (auto _ : state) {
        AttackOracle oracle(pipe, side, side);
        benchmark::DoNotOptimize(extract_associations(oracle));
    }
}
BENCHMARK(BM_association_extraction)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace
