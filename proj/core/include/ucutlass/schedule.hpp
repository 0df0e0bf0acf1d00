#pragma once

// Offline replay of SOL-guided budget scheduling: given per-problem attempt
// logs, simulate breadth-first round-robin allocation under (epsilon, w)
// stopping policies and report token savings and speedup retention relative
// to fixed allocation.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucutlass/diagnostics.hpp"
#include "ucutlass/logs.hpp"

namespace ucutlass {

enum class StopReason { budget_exhausted, sol_gap, no_progress };

std::string to_string(StopReason reason);

enum class Discipline { round_robin };

struct SchedulingPolicy {
    // SOL-gap stop: fires when t_best <= (1+epsilon)*t_sol while ahead of the
    // baseline. Disabled when absent. epsilon == 0 means "stop at the bound".
    std::optional<double> epsilon;
    // No-progress stop: fires after window_w consecutive non-improving
    // consumed attempts while ahead of the baseline. 0 disables the window.
    int window_w = 0;
    Discipline discipline = Discipline::round_robin;
    // Round-robin dealing is deterministic, so worker count never changes
    // eligibility outcomes; it is validated (>= 1) and otherwise unused.
    int workers = 1;

    bool fixed_allocation() const { return !epsilon.has_value() && window_w == 0; }
    bool operator==(const SchedulingPolicy&) const = default;
};

struct ProblemOutcome {
    std::string problem_id;
    int attempts_consumed = 0;
    std::int64_t tokens_consumed = 0;
    std::optional<double> t_best_final;  // absent when no correct attempt was consumed
    // t_ref / t_best for solved problems; unsolved problems fall back to 1.0
    // (the bootstrap seed delegates to the baseline, so its runtime is t_ref).
    double speedup_final = 1.0;
    StopReason stop_reason = StopReason::budget_exhausted;

    bool operator==(const ProblemOutcome&) const = default;
};

struct ScheduleResult {
    SchedulingPolicy policy;
    std::vector<ProblemOutcome> per_problem;  // sorted by problem_id
    std::int64_t total_tokens = 0;
    std::int64_t total_attempts = 0;
    // Totals for the both-criteria-disabled replay of the same logs, kept so
    // a result is self-describing for savings reports.
    std::int64_t fixed_total_tokens = 0;
    std::int64_t fixed_total_attempts = 0;
    double geomean_speedup = 1.0;
    double median_speedup = 1.0;
    double retention_geomean = 1.0;  // geomean / fixed-run geomean
    double retention_median = 1.0;
    // (geomean/geomean_fixed) * (tokens_fixed/tokens); +inf in the degenerate
    // zero-token-policy corner (the standalone op below throws instead).
    double efficiency_gain = 1.0;

    std::map<std::string, StopReason> stop_reasons() const;
    bool operator==(const ScheduleResult&) const = default;
};

// Simulate the policy over the logs. Problems are dealt breadth-first
// round-robin in problem-id order; one work item is one attempt
// (unit=attempt) or one iteration's worth of attempts (unit=iteration, with
// stopping evaluated only at iteration boundaries). Eligibility:
//   (i)  while t_best >= t_ref the problem stays eligible until its log is
//        exhausted (neither criterion can fire while behind the baseline);
//   (ii) SOL-gap stop: t_best <= (1+epsilon)*t_sol and t_best < t_ref;
//   (iii) no-progress stop: window_w consecutive non-improving consumed
//        attempts while ahead (the window resets while behind; failed and
//        integrity-excluded attempts count toward the window and toward
//        tokens but never update t_best).
// When both criteria fire on the same consumed item, sol_gap wins.
// Throws LogError on malformed logs and DomainError on a malformed policy.
ScheduleResult replay(const std::vector<ProblemLog>& logs, const SchedulingPolicy& policy);

// (geomean_policy / geomean_fixed) * (tokens_fixed / tokens_policy).
// `fixed` must be the both-criteria-disabled replay of the same logs.
// Throws DivisionError when the policy consumed zero tokens.
double efficiency_gain(const ScheduleResult& result, const ScheduleResult& fixed);

struct PricingConfig {
    std::map<std::string, double> price_per_million;  // model -> $ per 1M tokens
    std::string default_model;

    double price_for(const std::string& model) const;  // DomainError on unknown model
};

// Tiered defaults: small 0.25, medium 1.25, large 1.75 ($ per million tokens).
PricingConfig default_pricing();
// {"prices_per_million_tokens": {...}, "default_model": "..."}; IoError on bad input.
PricingConfig pricing_from_json(const std::string& text);

struct SweepCell {
    std::optional<double> epsilon;
    int window_w = 0;
    ScheduleResult result;
    double normalized_cost = 1.0;  // tokens / fixed-run tokens
    double dollar_cost = 0.0;      // tokens * price / 1e6
    bool on_pareto_frontier = false;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // epsilon-major over the (epsilons x windows) grid
    ScheduleResult fixed;          // both-criteria-disabled baseline
    std::vector<std::size_t> pareto_indices;  // upper convex hull, cost ascending
    std::optional<std::size_t> best_under_retention;
    double min_retention = 0.0;
};

// One replay per (epsilon, window) grid cell, plus the Pareto frontier (upper
// convex hull of normalized cost vs geomean speedup) and the cheapest policy
// whose geomean retention is at least min_retention. Epsilons may contain
// nullopt for a disabled SOL-gap criterion. Throws DomainError on empty grids.
SweepResult sweep(const std::vector<ProblemLog>& logs,
                  const std::vector<std::optional<double>>& epsilons,
                  const std::vector<int>& windows,
                  double min_retention = 0.0,
                  const PricingConfig& pricing = default_pricing(),
                  const std::string& model = "");

// Human-readable replay summary (token/attempt savings, retention, stop reasons).
std::string schedule_result_to_table(const ScheduleResult& result);

// One row per (epsilon, window, problem).
std::string sweep_to_csv(const SweepResult& swept);

// Pareto summary table: one row per grid cell with normalized/dollar cost,
// geomean speedup, retention, efficiency gain, and frontier membership.
std::string pareto_to_csv(const SweepResult& swept);

}  // namespace ucutlass
