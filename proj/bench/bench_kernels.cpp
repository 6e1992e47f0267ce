// Parallel kernels against their serial references. Set OMP_NUM_THREADS or
// pass --workers=N (parsed here) to vary the worker count.

#include <benchmark/benchmark.h>

#include <cstring>
#include <string>

#include "primepairs/common.hpp"
#include "primepairs/reference.hpp"
#include "primepairs/sieve.hpp"
#include "primepairs/sums.hpp"

using namespace primepairs;

namespace {

const PrimeTable& table() {
    static const PrimeTable t = build_prime_table(20'000'002);
    return t;
}

void SieveSegmented(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(build_prime_table(static_cast<std::uint64_t>(st.range(0))));
}

void SieveMonolithic(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(build_prime_table_monolithic(static_cast<std::uint64_t>(st.range(0))));
}

void PairWeightedParallel(benchmark::State& st) {
    const auto f = LinearForm::make(1, 2);
    for (auto _ : st) benchmark::DoNotOptimize(pair_weighted_sum(table(), st.range(0), f).value);
}

void PairWeightedSerial(benchmark::State& st) {
    const auto f = LinearForm::make(1, 2);
    for (auto _ : st) benchmark::DoNotOptimize(reference::pair_weighted_sum(table(), st.range(0), f));
}

void PsiParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(psi(table(), st.range(0)));
}

void PsiSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(reference::psi(table(), st.range(0)));
}

void MobiusParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(twisted_mobius_sum(st.range(0), 1.0, 1).value);
}

void MobiusSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(reference::mobius_log_sum(st.range(0), 1.0, 1));
}

}  // namespace

BENCHMARK(SieveSegmented)->Arg(10'000'000)->Arg(100'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(SieveMonolithic)->Arg(10'000'000)->Arg(100'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(PairWeightedParallel)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(PairWeightedSerial)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(PsiParallel)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(PsiSerial)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(MobiusParallel)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(MobiusSerial)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i)
        if (std::strncmp(argv[i], "--workers=", 10) == 0) {
            set_workers(std::stoi(argv[i] + 10));
            for (int j = i; j + 1 < argc; ++j) argv[j] = argv[j + 1];
            --argc;
            break;
        }
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
}
