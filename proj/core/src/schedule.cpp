#include "ucutlass/schedule.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace ucutlass {

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::budget_exhausted: return "budget_exhausted";
        case StopReason::sol_gap: return "sol_gap";
        case StopReason::no_progress: return "no_progress";
    }
    return "budget_exhausted";
}

std::map<std::string, StopReason> ScheduleResult::stop_reasons() const {
    std::map<std::string, StopReason> reasons;
    for (const ProblemOutcome& outcome : per_problem) {
        reasons[outcome.problem_id] = outcome.stop_reason;
    }
    return reasons;
}

namespace {

double geomean_of(const std::vector<double>& values) {
    if (values.empty()) return 1.0;
    double log_sum = 0.0;
    for (double v : values) log_sum += std::log(v);
    return std::exp(log_sum / static_cast<double>(values.size()));
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 1.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct SimState {
    const ProblemLog* log = nullptr;
    std::size_t pos = 0;  // next unconsumed attempt
    bool solved = false;
    double t_best = std::numeric_limits<double>::infinity();
    int consumed = 0;
    std::int64_t tokens = 0;
    int stall = 0;  // consecutive non-improving consumed attempts while ahead
    bool stopped = false;
    StopReason reason = StopReason::budget_exhausted;

    bool active() const { return !stopped && pos < log->attempts.size(); }
};

// Consume one work item (an attempt, or an iteration's worth of attempts)
// and evaluate the stopping criteria at the item boundary.
void consume_work_item(SimState& st, const SchedulingPolicy& policy) {
    const ProblemLog& log = *st.log;
    std::size_t item_size = 1;
    if (log.unit == ScheduleUnit::iteration) {
        item_size = static_cast<std::size_t>(log.iteration_shape->attempts_per_iteration());
    }
    for (std::size_t k = 0; k < item_size && st.pos < log.attempts.size(); ++k) {
        const AttemptRecord& attempt = log.attempts[st.pos++];
        st.consumed += 1;
        st.tokens += attempt.tokens;
        bool improved = false;
        if (attempt.correct && !attempt.excluded_by_integrity && attempt.runtime_s) {
            if (!st.solved || *attempt.runtime_s < st.t_best) {
                st.t_best = *attempt.runtime_s;
                st.solved = true;
                improved = true;
            }
        }
        const bool ahead = st.solved && st.t_best < log.t_ref;
        if (!ahead || improved) {
            st.stall = 0;
        } else {
            st.stall += 1;
        }
    }
    const bool ahead = st.solved && st.t_best < log.t_ref;
    if (!ahead) return;  // eligible until log exhaustion while behind the baseline
    if (policy.epsilon && st.t_best <= (1.0 + *policy.epsilon) * log.t_sol) {
        st.stopped = true;
        st.reason = StopReason::sol_gap;  // wins when both criteria fire together
        return;
    }
    if (policy.window_w > 0 && st.stall >= policy.window_w) {
        st.stopped = true;
        st.reason = StopReason::no_progress;
    }
}

void check_policy(const SchedulingPolicy& policy) {
    if (policy.epsilon && *policy.epsilon < 0) {
        throw DomainError("scheduling policy: epsilon must be >= 0 when enabled");
    }
    if (policy.window_w < 0) {
        throw DomainError("scheduling policy: window_w must be >= 0");
    }
    if (policy.workers < 1) {
        throw DomainError("scheduling policy: workers must be >= 1");
    }
}

// Core simulation without the retention/efficiency fields (those compare
// against the fixed run, which is itself a replay).
ScheduleResult replay_core(const std::vector<ProblemLog>& logs, const SchedulingPolicy& policy) {
    std::vector<SimState> states;
    states.reserve(logs.size());
    std::set<std::string> seen;
    for (const ProblemLog& log : logs) {
        if (!seen.insert(log.problem_id).second) {
            throw LogError("duplicate problem '" + log.problem_id + "' in replay input");
        }
        SimState st;
        st.log = &log;
        states.push_back(st);
    }
    std::sort(states.begin(), states.end(), [](const SimState& a, const SimState& b) {
        return a.log->problem_id < b.log->problem_id;
    });

    // Breadth-first round-robin: each pass deals one work item to every
    // still-active problem in problem-id order.
    bool any_active = true;
    while (any_active) {
        any_active = false;
        for (SimState& st : states) {
            if (!st.active()) continue;
            any_active = true;
            consume_work_item(st, policy);
        }
    }

    ScheduleResult result;
    result.policy = policy;
    std::vector<double> speedups;
    speedups.reserve(states.size());
    for (const SimState& st : states) {
        ProblemOutcome outcome;
        outcome.problem_id = st.log->problem_id;
        outcome.attempts_consumed = st.consumed;
        outcome.tokens_consumed = st.tokens;
        if (st.solved) {
            outcome.t_best_final = st.t_best;
            outcome.speedup_final = st.log->t_ref / st.t_best;
        } else {
            outcome.speedup_final = 1.0;
        }
        outcome.stop_reason = st.stopped ? st.reason : StopReason::budget_exhausted;
        speedups.push_back(outcome.speedup_final);
        result.total_tokens += outcome.tokens_consumed;
        result.total_attempts += outcome.attempts_consumed;
        result.per_problem.push_back(std::move(outcome));
    }
    result.geomean_speedup = geomean_of(speedups);
    result.median_speedup = median_of(speedups);
    return result;
}

void fill_relative_fields(ScheduleResult& result, const ScheduleResult& fixed) {
    result.fixed_total_tokens = fixed.total_tokens;
    result.fixed_total_attempts = fixed.total_attempts;
    result.retention_geomean = result.geomean_speedup / fixed.geomean_speedup;
    result.retention_median =
        fixed.median_speedup > 0 ? result.median_speedup / fixed.median_speedup : 1.0;
    if (result.total_tokens > 0) {
        result.efficiency_gain = result.retention_geomean *
                                 (static_cast<double>(fixed.total_tokens) /
                                  static_cast<double>(result.total_tokens));
    } else if (fixed.total_tokens == 0) {
        result.efficiency_gain = result.retention_geomean;  // 0/0 token ratio treated as 1
    } else {
        result.efficiency_gain = std::numeric_limits<double>::infinity();
    }
}

}  // namespace

ScheduleResult replay(const std::vector<ProblemLog>& logs, const SchedulingPolicy& policy) {
    check_policy(policy);
    validate_run_logs(logs);
    ScheduleResult result = replay_core(logs, policy);
    if (policy.fixed_allocation()) {
        fill_relative_fields(result, result);
    } else {
        SchedulingPolicy fixed_policy;
        fixed_policy.discipline = policy.discipline;
        fixed_policy.workers = policy.workers;
        const ScheduleResult fixed = replay_core(logs, fixed_policy);
        fill_relative_fields(result, fixed);
    }
    return result;
}

double efficiency_gain(const ScheduleResult& result, const ScheduleResult& fixed) {
    if (result.total_tokens == 0) {
        throw DivisionError("efficiency_gain: policy consumed zero tokens");
    }
    if (fixed.geomean_speedup <= 0) {
        throw DivisionError("efficiency_gain: fixed-run geomean speedup must be > 0");
    }
    return (result.geomean_speedup / fixed.geomean_speedup) *
           (static_cast<double>(fixed.total_tokens) / static_cast<double>(result.total_tokens));
}

double PricingConfig::price_for(const std::string& model) const {
    auto it = price_per_million.find(model);
    if (it == price_per_million.end()) {
        throw DomainError("pricing config: unknown model '" + model + "'");
    }
    return it->second;
}

PricingConfig default_pricing() {
    PricingConfig pricing;
    pricing.price_per_million = {{"small", 0.25}, {"medium", 1.25}, {"large", 1.75}};
    pricing.default_model = "medium";
    return pricing;
}

PricingConfig pricing_from_json(const std::string& text) {
    PricingConfig pricing;
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        for (const auto& [model, price] : j.at("prices_per_million_tokens").items()) {
            const double p = price.get<double>();
            if (p <= 0) throw IoError("pricing config: price for '" + model + "' must be > 0");
            pricing.price_per_million[model] = p;
        }
        pricing.default_model = j.at("default_model").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("pricing config: ") + e.what());
    }
    if (pricing.price_per_million.empty()) {
        throw IoError("pricing config: no model prices given");
    }
    if (!pricing.price_per_million.count(pricing.default_model)) {
        throw IoError("pricing config: default_model '" + pricing.default_model +
                      "' has no price entry");
    }
    return pricing;
}

namespace {

// Indices of the upper convex hull of (cost, value) points, cost ascending.
// Per distinct cost only the best value competes; collinear midpoints are
// dropped so the frontier is the minimal vertex set.
std::vector<std::size_t> upper_hull(const std::vector<SweepCell>& cells) {
    std::map<double, std::size_t> best_at_cost;  // cost -> cell index with max geomean
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double cost = cells[i].normalized_cost;
        auto it = best_at_cost.find(cost);
        if (it == best_at_cost.end() ||
            cells[i].result.geomean_speedup > cells[it->second].result.geomean_speedup) {
            best_at_cost[cost] = i;
        }
    }
    std::vector<std::size_t> candidates;
    candidates.reserve(best_at_cost.size());
    for (const auto& [cost, idx] : best_at_cost) candidates.push_back(idx);

    auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        const double ox = cells[o].normalized_cost, oy = cells[o].result.geomean_speedup;
        const double ax = cells[a].normalized_cost, ay = cells[a].result.geomean_speedup;
        const double bx = cells[b].normalized_cost, by = cells[b].result.geomean_speedup;
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
    };
    std::vector<std::size_t> hull;
    for (std::size_t idx : candidates) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), idx) >= 0) {
            hull.pop_back();
        }
        hull.push_back(idx);
    }
    return hull;
}

}  // namespace

SweepResult sweep(const std::vector<ProblemLog>& logs,
                  const std::vector<std::optional<double>>& epsilons,
                  const std::vector<int>& windows,
                  double min_retention,
                  const PricingConfig& pricing,
                  const std::string& model) {
    if (epsilons.empty() || windows.empty()) {
        throw DomainError("sweep: epsilon and window grids must be nonempty");
    }
    validate_run_logs(logs);
    const double price = pricing.price_for(model.empty() ? pricing.default_model : model);

    SweepResult swept;
    swept.min_retention = min_retention;
    SchedulingPolicy fixed_policy;
    swept.fixed = replay_core(logs, fixed_policy);
    fill_relative_fields(swept.fixed, swept.fixed);

    for (const std::optional<double>& eps : epsilons) {
        for (int w : windows) {
            SchedulingPolicy policy;
            policy.epsilon = eps;
            policy.window_w = w;
            check_policy(policy);
            SweepCell cell;
            cell.epsilon = eps;
            cell.window_w = w;
            cell.result = replay_core(logs, policy);
            fill_relative_fields(cell.result, swept.fixed);
            cell.normalized_cost =
                swept.fixed.total_tokens > 0
                    ? static_cast<double>(cell.result.total_tokens) /
                          static_cast<double>(swept.fixed.total_tokens)
                    : 1.0;
            cell.dollar_cost = static_cast<double>(cell.result.total_tokens) * price / 1e6;
            swept.cells.push_back(std::move(cell));
        }
    }

    swept.pareto_indices = upper_hull(swept.cells);
    for (std::size_t idx : swept.pareto_indices) swept.cells[idx].on_pareto_frontier = true;

    for (std::size_t i = 0; i < swept.cells.size(); ++i) {
        const SweepCell& cell = swept.cells[i];
        if (cell.result.retention_geomean < min_retention) continue;
        if (!swept.best_under_retention) {
            swept.best_under_retention = i;
            continue;
        }
        const SweepCell& best = swept.cells[*swept.best_under_retention];
        if (cell.result.total_tokens < best.result.total_tokens ||
            (cell.result.total_tokens == best.result.total_tokens &&
             cell.result.retention_geomean > best.result.retention_geomean)) {
            swept.best_under_retention = i;
        }
    }
    return swept;
}

namespace {

std::string epsilon_text(const std::optional<double>& eps) {
    if (!eps) return "disabled";
    std::ostringstream out;
    out << *eps;
    return out.str();
}

double saved_fraction(std::int64_t policy_amount, std::int64_t fixed_amount) {
    if (fixed_amount == 0) return 0.0;
    return 1.0 - static_cast<double>(policy_amount) / static_cast<double>(fixed_amount);
}

}  // namespace

std::string schedule_result_to_table(const ScheduleResult& result) {
    std::ostringstream out;
    out << std::fixed;
    out << "Replay summary (epsilon=" << epsilon_text(result.policy.epsilon)
        << ", window=" << result.policy.window_w << ")\n";
    out << "  problems:         " << result.per_problem.size() << "\n";
    out << std::setprecision(1);
    out << "  attempts:         " << result.total_attempts << " / " << result.fixed_total_attempts
        << " (" << 100.0 * saved_fraction(result.total_attempts, result.fixed_total_attempts)
        << "% saved)\n";
    out << "  tokens:           " << result.total_tokens << " / " << result.fixed_total_tokens
        << " (" << 100.0 * saved_fraction(result.total_tokens, result.fixed_total_tokens)
        << "% saved)\n";
    out << std::setprecision(4);
    out << "  geomean speedup:  " << result.geomean_speedup << " (retention "
        << result.retention_geomean << ")\n";
    out << "  median speedup:   " << result.median_speedup << " (retention "
        << result.retention_median << ")\n";
    out << "  efficiency gain:  " << result.efficiency_gain << "\n";
    std::map<StopReason, int> reason_counts;
    for (const ProblemOutcome& outcome : result.per_problem) {
        reason_counts[outcome.stop_reason] += 1;
    }
    out << "  stop reasons:     ";
    bool first = true;
    for (StopReason reason :
         {StopReason::sol_gap, StopReason::no_progress, StopReason::budget_exhausted}) {
        if (!first) out << " ";
        first = false;
        out << to_string(reason) << "=" << reason_counts[reason];
    }
    out << "\n";
    return out.str();
}

std::string sweep_to_csv(const SweepResult& swept) {
    std::ostringstream out;
    out << "epsilon,window,problem_id,attempts_consumed,tokens_consumed,t_best_s,speedup,"
           "stop_reason\n";
    out.precision(12);
    for (const SweepCell& cell : swept.cells) {
        for (const ProblemOutcome& outcome : cell.result.per_problem) {
            out << epsilon_text(cell.epsilon) << "," << cell.window_w << ","
                << outcome.problem_id << "," << outcome.attempts_consumed << ","
                << outcome.tokens_consumed << ",";
            if (outcome.t_best_final) out << *outcome.t_best_final;
            out << "," << outcome.speedup_final << "," << to_string(outcome.stop_reason) << "\n";
        }
    }
    return out.str();
}

std::string pareto_to_csv(const SweepResult& swept) {
    std::ostringstream out;
    out << "epsilon,window,total_tokens,normalized_cost,dollar_cost,geomean_speedup,"
           "retention_geomean,efficiency_gain,pareto\n";
    out.precision(12);
    for (const SweepCell& cell : swept.cells) {
        out << epsilon_text(cell.epsilon) << "," << cell.window_w << ","
            << cell.result.total_tokens << "," << cell.normalized_cost << "," << cell.dollar_cost
            << "," << cell.result.geomean_speedup << "," << cell.result.retention_geomean << ","
            << cell.result.efficiency_gain << "," << (cell.on_pareto_frontier ? 1 : 0) << "\n";
    }
    return out.str();
}

}  // namespace ucutlass
