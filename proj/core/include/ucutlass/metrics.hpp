#pragma once

// Evaluation metrics over per-problem speedups: Fast-p and Attempt-Fast-p
// curves, signed area between curves, and scalar summaries (geomean, median,
// threshold counts).

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ucutlass/diagnostics.hpp"
#include "ucutlass/logs.hpp"

namespace ucutlass {

// How problems with no accepted correct attempt enter a speedup set:
// fallback_one treats the delivered kernel as the baseline-delegating seed
// (speedup 1.0); zero is the harsher convention used only for external
// cross-archive comparisons.
enum class UnsolvedConvention { fallback_one, zero };

std::string to_string(UnsolvedConvention convention);

struct SpeedupSet {
    std::map<std::string, double> entries;  // problem_id -> speedup (>= 0, finite)
    UnsolvedConvention unsolved_convention = UnsolvedConvention::fallback_one;

    bool operator==(const SpeedupSet&) const = default;
};

struct FastPCurve {
    std::vector<double> thresholds;  // sorted ascending
    std::vector<double> values;      // percent of problems with speedup >= r
};

// value(r) = 100 * |{ i : s_i >= r }| / N for each threshold r.
// Throws EmptySetError on an empty set and DomainError on unsorted thresholds.
FastPCurve fast_p(const SpeedupSet& set, const std::vector<double>& thresholds);

// Signed area between the two Fast-p curves, computed exactly as
// mean(a) - mean(b) via the complementary-CDF identity.
// Throws UniverseMismatchError when the problem sets differ.
double signed_area(const SpeedupSet& a, const SpeedupSet& b);

// Cross-check for signed_area: numeric trapezoid integration of
// [P_a(r) - P_b(r)] over [0, max+1] on a merged-breakpoint grid (each
// breakpoint contributes flanking points so the step plateaus are sampled
// exactly). Agrees with signed_area to well under 1e-6.
double signed_area_by_integration(const SpeedupSet& a, const SpeedupSet& b);

struct AttemptFastPCurve {
    double target = 2.0;         // the fixed speedup threshold r
    std::vector<double> values;  // values[k] = percent of problems whose
                                 // best-so-far speedup after k+1 attempts >= r
};

// Fixes the speedup target and sweeps over attempt counts. Best-so-far is
// taken over correct, non-excluded attempts (speedup = t_ref/runtime);
// problems with no correct attempt so far count at the fallback_one value.
// Problems whose logs end early hold their final best for larger counts.
// Throws EmptySetError on zero problems and DomainError on r <= 0.
AttemptFastPCurve attempt_fast_p(const std::vector<ProblemLog>& logs, double r);

struct SpeedupSummary {
    double geomean = 0.0;  // over positive entries only
    double median = 0.0;   // over all entries
    std::map<double, std::size_t> count_ge;  // counts at r in {1, 2, 4}
    std::size_t zeros_excluded_from_geomean = 0;  // warning count
    std::size_t count = 0;
};

// Throws EmptySetError on an empty set and GeomeanDomainError when no entry
// is positive (all-zero sets have no geomean).
SpeedupSummary summarize(const SpeedupSet& set);

// Log-spaced plotting thresholds from 0.25 to the set maximum (inclusive).
std::vector<double> plot_thresholds(const SpeedupSet& set, std::size_t points = 200);

// Exact step-function breakpoints: sorted unique speedup values.
std::vector<double> exact_thresholds(const SpeedupSet& set);

// Tabular io. Input columns: problem_id,t_ref,t_best with t_best left empty
// for unsolved problems (the convention supplies their speedup). A file whose
// header is exactly "problem_id,speedup" — the shape speedup_set_to_csv
// writes — is read back as direct speedups instead. IoError on malformed rows.
SpeedupSet speedup_set_from_csv(const std::string& text,
                                UnsolvedConvention convention = UnsolvedConvention::fallback_one);
std::string speedup_set_to_csv(const SpeedupSet& set);  // problem_id,speedup
std::string fast_p_to_csv(const FastPCurve& curve);
std::string attempt_fast_p_to_csv(const AttemptFastPCurve& curve);
std::string summary_to_text(const SpeedupSummary& summary);

}  // namespace ucutlass
