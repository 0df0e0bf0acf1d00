// Scheduler benchmarks: single-policy replay and a policy-grid sweep over a
// fixed randomly generated archive (64 problems x up to 40 attempts), sized
// like a real optimization-run log set.

#include <benchmark/benchmark.h>

#include <optional>
#include <vector>

#include "ucutlass/schedule.hpp"

#include "testutil.hpp"

namespace {

using namespace ucutlass;

std::vector<ProblemLog> archive() {
    testutil::Rng rng(777);
    std::vector<ProblemLog> logs;
    while (logs.size() < 64) {
        for (ProblemLog log : testutil::random_logs(rng)) {
            log.problem_id = "p" + std::to_string(logs.size());
            for (AttemptRecord& attempt : log.attempts) attempt.problem_id = log.problem_id;
            logs.push_back(std::move(log));
            if (logs.size() == 64) break;
        }
    }
    return logs;
}

void BM_ReplayFixed(benchmark::State& state) {
    const std::vector<ProblemLog> logs = archive();
    for (auto _ : state) {
        benchmark::DoNotOptimize(replay(logs, SchedulingPolicy{}));
    }
}
BENCHMARK(BM_ReplayFixed);

void BM_ReplayPolicy(benchmark::State& state) {
    const std::vector<ProblemLog> logs = archive();
    SchedulingPolicy policy;
    policy.epsilon = 0.25;
    policy.window_w = 8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(replay(logs, policy));
    }
}
BENCHMARK(BM_ReplayPolicy);

void BM_SweepGrid(benchmark::State& state) {
    const std::vector<ProblemLog> logs = archive();
    const std::vector<std::optional<double>> epsilons = {std::nullopt, 0.25, 0.5, 1.0};
    const std::vector<int> windows = {0, 4, 8};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(logs, epsilons, windows));
    }
}
BENCHMARK(BM_SweepGrid);

}  // namespace

BENCHMARK_MAIN();
