// Compilation-path benchmarks: tokenizer/parser, lowering, validation, header
// emission, and the full pipeline including the content hash. The flagship
// program is representative of real inputs (seven bindings, three epilogues).

#include <benchmark/benchmark.h>

#include <string>

#include "ucutlass/emit.hpp"
#include "ucutlass/hash.hpp"
#include "ucutlass/lower.hpp"
#include "ucutlass/parser.hpp"
#include "ucutlass/validate.hpp"

namespace {

using namespace ucutlass;

const char* kFigureProgram =
    "gemm().with_dtype(input=fp16, acc=fp32, output=fp16)"
    ".with_layout(A=RowMajor, B=RowMajor, C=RowMajor)"
    ".with_arch(sm_90a)"
    ".with_threadblockshape(m=128, n=128, k=64)"
    ".with_stages(2)"
    ".with_alignment(A=8, B=8, C=8)"
    ".with_scheduler(kernel=tma, epilogue=tma)"
    " >> bias() >> gelu() >> clip(min=0, max=6)";

void BM_Parse(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse(kFigureProgram));
    }
}
BENCHMARK(BM_Parse);

void BM_Lower(benchmark::State& state) {
    const DslProgram program = parse(kFigureProgram);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lower(program));
    }
}
BENCHMARK(BM_Lower);

void BM_Validate(benchmark::State& state) {
    const AnyConfig config = lower(parse(kFigureProgram));
    for (auto _ : state) {
        benchmark::DoNotOptimize(validate(config));
    }
}
BENCHMARK(BM_Validate);

void BM_Emit(benchmark::State& state) {
    const AnyConfig config = lower(parse(kFigureProgram));
    for (auto _ : state) {
        benchmark::DoNotOptimize(emit(config));
    }
}
BENCHMARK(BM_Emit);

void BM_ConfigHash(benchmark::State& state) {
    const AnyConfig config = lower(parse(kFigureProgram));
    for (auto _ : state) {
        benchmark::DoNotOptimize(config_hash(config));
    }
}
BENCHMARK(BM_ConfigHash);

void BM_FullCompile(benchmark::State& state) {
    for (auto _ : state) {
        const AnyConfig config = lower(parse(kFigureProgram));
        benchmark::DoNotOptimize(validate(config));
        benchmark::DoNotOptimize(emit(config));
        benchmark::DoNotOptimize(config_hash(config));
    }
}
BENCHMARK(BM_FullCompile);

}  // namespace

BENCHMARK_MAIN();
