#pragma once

// Run-log types for offline schedule replay: per-problem attempt histories
// recorded by an optimization agent, loaded from newline-delimited records.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ucutlass/diagnostics.hpp"

namespace ucutlass {

struct AttemptRecord {
    std::string problem_id;
    int index = 0;                     // 1-based order within the problem
    std::optional<double> runtime_s;   // absent when the attempt failed
    bool correct = false;
    std::int64_t tokens = 0;
    bool excluded_by_integrity = false;

    bool operator==(const AttemptRecord&) const = default;
};

enum class ScheduleUnit { attempt, iteration };

std::string to_string(ScheduleUnit unit);
ScheduleUnit schedule_unit_from_string(const std::string& text);

struct IterationShape {
    int iterations = 0;
    int hypotheses_per_iter = 0;
    int attempts_per_hypothesis = 0;

    int attempts_per_iteration() const { return hypotheses_per_iter * attempts_per_hypothesis; }
    bool operator==(const IterationShape&) const = default;
};

struct ProblemLog {
    std::string problem_id;
    double t_ref = 0;  // baseline runtime (seconds)
    double t_sol = 0;  // FP16 SOL bound used for scheduling (seconds)
    std::vector<AttemptRecord> attempts;
    ScheduleUnit unit = ScheduleUnit::attempt;
    std::optional<IterationShape> iteration_shape;

    bool operator==(const ProblemLog&) const = default;
};

// Parse a run log from JSONL text. Two record shapes are accepted:
//   {"type":"problem","problem_id":...,"t_ref":...,"t_sol":...,
//    "unit":"attempt"|"iteration", "iteration_shape":{...}?}
//   {"type":"attempt","problem_id":...,"index":N,"runtime_s":x|null,
//    "correct":bool,"tokens":N,"excluded_by_integrity":bool?}
// Problems appear in first-seen order; attempts must arrive with strictly
// increasing index within their problem. Throws LogError on malformed input.
std::vector<ProblemLog> run_logs_from_jsonl(const std::string& text);

std::string run_logs_to_jsonl(const std::vector<ProblemLog>& logs);

// Validate structural invariants (positive t_ref/t_sol, strictly increasing
// attempt indices, iteration shape consistency). Throws LogError.
void validate_run_logs(const std::vector<ProblemLog>& logs);

}  // namespace ucutlass
