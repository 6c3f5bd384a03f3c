#include <benchmark/benchmark.h>

#include "chaosbreak/rng.hpp"
#include "chaosbreak/stats.hpp"
#include "chaosbreak/testdata.hpp"

using namespace chaosbreak;

namespace {

void BM_encrypt_3stage(benchmark::State& state) {
    Rng rng(1);
    const std::size_t side = static_cast<std::size_t>(state.range(0));
    const auto pipe = random_pndcc(rng, StagePattern("PDP"), side * side, 2);
    const ByteImage img = natural_test_image(side, side);
    for (auto _ : state) benchmark::DoNotOptimize(pipe.encrypt(img));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_encrypt_3stage)->Arg(64)->Arg(256);

void BM_encrypt_5stage(benchmark::State& state) {
    Rng rng(2);
    const std::size_t side = static_cast<std::size_t>(state.range(0));
    const auto pipe = random_pndcc(rng, StagePattern("PDPDP"), side * side, 1);
    const ByteImage img = natural_test_image(side, side);
    for (auto _ : state) benchmark::DoNotOptimize(pipe.encrypt(img));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_encrypt_5stage)->Arg(64)->Arg(256);

void BM_encrypt_pdcc(benchmark::State& state) {
    Rng rng(3);
    const std::size_t side = static_cast<std::size_t>(state.range(0));
    const auto pipe = random_pdcc(rng, StagePattern("PDPDP"), side * side, 1);
    const ByteImage img = natural_test_image(side, side);
    for (auto _ : state) benchmark::DoNotOptimize(pipe.encrypt(img));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_encrypt_pdcc)->Arg(64)->Arg(256);

void BM_stats_battery(benchmark::State& state) {
    const ByteImage img = natural_test_image(256, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjacent_correlation(img, Direction::horizontal));
        benchmark::DoNotOptimize(adjacent_correlation(img, Direction::vertical));
        benchmark::DoNotOptimize(adjacent_correlation(img, Direction::diagonal));
        benchmark::DoNotOptimize(entropy_bits(img));
    }
}
BENCHMARK(BM_stats_battery);

} // namespace

BENCHMARK_MAIN();
