// Analysis-path benchmarks: SOL characterization, ROI ranking, and the
// Fast-p / signed-area metrics over realistically sized inputs.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "ucutlass/metrics.hpp"
#include "ucutlass/sol.hpp"
#include "ucutlass/triage.hpp"

#include "testutil.hpp"

namespace {

using namespace ucutlass;

ProblemSpec gemm4096_spec() {
    ProblemSpec spec;
    spec.name = "gemm-4096";
    spec.io_dtype = DType::fp32;
    OpNode node;
    node.kind = OpNodeKind::gemm;
    node.m = node.n = node.k = 4096;
    spec.ops.push_back(node);
    return spec;
}

HardwareSpec example_hw() {
    HardwareSpec hw;
    hw.name = "bench-gpu";
    hw.peak_flops = {{DType::fp32, 4.947e14}, {DType::fp16, 9.894e14}};
    hw.peak_bw = 3.35e12;
    return hw;
}

void BM_SolGemm(benchmark::State& state) {
    const ProblemSpec spec = gemm4096_spec();
    const HardwareSpec hw = example_hw();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sol(spec, hw, DType::fp32));
    }
}
BENCHMARK(BM_SolGemm);

void BM_SolRandomChain(benchmark::State& state) {
    testutil::Rng rng(1234);
    const HardwareSpec hw = example_hw();
    std::vector<ProblemSpec> specs;
    for (int i = 0; i < 64; ++i) specs.push_back(testutil::random_problem_spec(rng));
    std::size_t next = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sol(specs[next], hw, DType::fp16));
        next = (next + 1) % specs.size();
    }
}
BENCHMARK(BM_SolRandomChain);

void BM_RankHypotheses(benchmark::State& state) {
    testutil::Rng rng(5678);
    std::vector<Hypothesis> hypotheses;
    for (int i = 0; i < 64; ++i) {
        Hypothesis h;
        h.id = "h" + std::to_string(i);
        h.est_speedup = testutil::rand_real(rng, 1.0, 8.0);
        h.risk_impl = testutil::rand_real(rng, 1.0, 5.0);
        h.risk_perf = testutil::rand_real(rng, 1.0, 5.0);
        hypotheses.push_back(h);
    }
    const GapContext ctx{42.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank(hypotheses, ctx));
    }
}
BENCHMARK(BM_RankHypotheses);

void BM_FastPCurve(benchmark::State& state) {
    testutil::Rng rng(9012);
    const SpeedupSet set = testutil::random_speedup_set(rng, 1024);
    const std::vector<double> grid = plot_thresholds(set);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fast_p(set, grid));
    }
}
BENCHMARK(BM_FastPCurve);

void BM_SignedArea(benchmark::State& state) {
    testutil::Rng rng(3456);
    const SpeedupSet a = testutil::random_speedup_set(rng, 1024);
    const SpeedupSet b = testutil::random_speedup_set(rng, 1024);
    for (auto _ : state) {
        benchmark::DoNotOptimize(signed_area(a, b));
    }
}
BENCHMARK(BM_SignedArea);

}  // namespace

BENCHMARK_MAIN();
