#include "ucutlass/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace ucutlass {

std::string to_string(UnsolvedConvention convention) {
    return convention == UnsolvedConvention::fallback_one ? "fallback_one" : "zero";
}

namespace {

void check_entries(const SpeedupSet& set) {
    for (const auto& [id, s] : set.entries) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw DomainError("speedup for '" + id + "' must be finite and >= 0");
        }
    }
}

double mean_of(const SpeedupSet& set) {
    double sum = 0.0;
    for (const auto& [id, s] : set.entries) sum += s;
    return sum / static_cast<double>(set.entries.size());
}

// Fraction (not percent) of entries with speedup >= r.
double ccdf(const SpeedupSet& set, double r) {
    std::size_t hits = 0;
    for (const auto& [id, s] : set.entries) {
        if (s >= r) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(set.entries.size());
}

}  // namespace

FastPCurve fast_p(const SpeedupSet& set, const std::vector<double>& thresholds) {
    if (set.entries.empty()) throw EmptySetError("fast_p over an empty speedup set");
    check_entries(set);
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        if (thresholds[i] < thresholds[i - 1]) {
            throw DomainError("fast_p thresholds must be sorted ascending");
        }
    }
    FastPCurve curve;
    curve.thresholds = thresholds;
    curve.values.reserve(thresholds.size());
    for (double r : thresholds) curve.values.push_back(100.0 * ccdf(set, r));
    return curve;
}

double signed_area(const SpeedupSet& a, const SpeedupSet& b) {
    if (a.entries.empty() || b.entries.empty()) {
        throw EmptySetError("signed_area over an empty speedup set");
    }
    check_entries(a);
    check_entries(b);
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    for (; ia != a.entries.end() && ib != b.entries.end(); ++ia, ++ib) {
        if (ia->first != ib->first) {
            throw UniverseMismatchError("signed_area requires the same problem universe ('" +
                                        ia->first + "' vs '" + ib->first + "')");
        }
    }
    if (ia != a.entries.end() || ib != b.entries.end()) {
        throw UniverseMismatchError("signed_area requires the same problem universe (sizes " +
                                    std::to_string(a.entries.size()) + " vs " +
                                    std::to_string(b.entries.size()) + ")");
    }
    return mean_of(a) - mean_of(b);
}

double signed_area_by_integration(const SpeedupSet& a, const SpeedupSet& b) {
    if (a.entries.empty() || b.entries.empty()) {
        throw EmptySetError("signed_area over an empty speedup set");
    }
    double hi = 0.0;
    std::set<double> breakpoints;
    for (const SpeedupSet* set : {&a, &b}) {
        for (const auto& [id, s] : set->entries) {
            breakpoints.insert(s);
            hi = std::max(hi, s);
        }
    }
    hi += 1.0;

    // Sample each plateau exactly by flanking every breakpoint; the sliver
    // across each jump contributes O(delta) error, far below 1e-6.
    constexpr double delta = 1e-9;
    std::vector<double> grid;
    grid.push_back(0.0);
    for (double t : breakpoints) {
        if (t - delta > 0.0 && t - delta < hi) grid.push_back(t - delta);
        if (t > 0.0 && t < hi) grid.push_back(t);
        if (t + delta < hi) grid.push_back(t + delta);
    }
    grid.push_back(hi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto diff = [&](double r) { return ccdf(a, r) - ccdf(b, r); };
    double integral = 0.0;
    double prev_x = grid.front();
    double prev_y = diff(prev_x);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double x = grid[i];
        const double y = diff(x);
        integral += 0.5 * (prev_y + y) * (x - prev_x);
        prev_x = x;
        prev_y = y;
    }
    return integral;
}

AttemptFastPCurve attempt_fast_p(const std::vector<ProblemLog>& logs, double r) {
    if (r <= 0) throw DomainError("attempt_fast_p requires target r > 0");
    if (logs.empty()) throw EmptySetError("attempt_fast_p over zero problems");
    validate_run_logs(logs);

    std::size_t max_attempts = 0;
    for (const ProblemLog& log : logs) max_attempts = std::max(max_attempts, log.attempts.size());
    if (max_attempts == 0) throw EmptySetError("attempt_fast_p over logs with no attempts");

    AttemptFastPCurve curve;
    curve.target = r;
    curve.values.assign(max_attempts, 0.0);
    for (const ProblemLog& log : logs) {
        double best = 1.0;  // fallback_one: the seed delegates to the baseline
        std::size_t reached_at = std::numeric_limits<std::size_t>::max();
        if (best >= r) reached_at = 0;  // counts from the first attempt onward
        for (std::size_t k = 0; k < log.attempts.size() && reached_at > k; ++k) {
            const AttemptRecord& attempt = log.attempts[k];
            if (attempt.correct && !attempt.excluded_by_integrity && attempt.runtime_s) {
                best = std::max(best, log.t_ref / *attempt.runtime_s);
            }
            if (best >= r) reached_at = k;
        }
        for (std::size_t k = reached_at; k < max_attempts; ++k) curve.values[k] += 1.0;
    }
    const double scale = 100.0 / static_cast<double>(logs.size());
    for (double& v : curve.values) v *= scale;
    return curve;
}

SpeedupSummary summarize(const SpeedupSet& set) {
    if (set.entries.empty()) throw EmptySetError("summarize over an empty speedup set");
    check_entries(set);

    SpeedupSummary summary;
    summary.count = set.entries.size();

    double log_sum = 0.0;
    std::size_t positive = 0;
    std::vector<double> values;
    values.reserve(set.entries.size());
    for (const auto& [id, s] : set.entries) {
        values.push_back(s);
        if (s > 0) {
            log_sum += std::log(s);
            ++positive;
        } else {
            ++summary.zeros_excluded_from_geomean;
        }
    }
    if (positive == 0) {
        throw GeomeanDomainError("geomean undefined: no positive speedups in the set");
    }
    summary.geomean = std::exp(log_sum / static_cast<double>(positive));

    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    summary.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);

    for (double r : {1.0, 2.0, 4.0}) {
        const auto first = std::lower_bound(values.begin(), values.end(), r);
        summary.count_ge[r] = static_cast<std::size_t>(values.end() - first);
    }
    return summary;
}

std::vector<double> plot_thresholds(const SpeedupSet& set, std::size_t points) {
    if (set.entries.empty()) throw EmptySetError("plot_thresholds over an empty speedup set");
    if (points < 2) throw DomainError("plot_thresholds requires at least 2 points");
    const double lo = 0.25;
    double hi = lo;
    for (const auto& [id, s] : set.entries) hi = std::max(hi, s);
    if (hi <= lo) return {lo};
    std::vector<double> grid;
    grid.reserve(points);
    const double log_lo = std::log(lo);
    const double step = (std::log(hi) - log_lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid.push_back(std::exp(log_lo + step * static_cast<double>(i)));
    }
    grid.back() = hi;  // guard against rounding past the exact maximum
    return grid;
}

std::vector<double> exact_thresholds(const SpeedupSet& set) {
    std::set<double> unique_values;
    for (const auto& [id, s] : set.entries) unique_values.insert(s);
    return {unique_values.begin(), unique_values.end()};
}

SpeedupSet speedup_set_from_csv(const std::string& text, UnsolvedConvention convention) {
    SpeedupSet set;
    set.unsolved_convention = convention;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    // The header "problem_id,speedup" selects the shape speedup_set_to_csv
    // writes, so filtered sets round-trip; any other (or no) header means the
    // raw timing table problem_id,t_ref,t_best.
    bool direct_speedups = false;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("problem_id", 0) == 0) {  // optional header row
                direct_speedups = (line == "problem_id,speedup");
                continue;
            }
        }
        std::istringstream row(line);
        if (direct_speedups) {
            std::string id, speedup_text;
            if (!std::getline(row, id, ',') || !std::getline(row, speedup_text, ',')) {
                throw IoError("speedup table line " + std::to_string(line_no) +
                              ": expected problem_id,speedup");
            }
            double speedup = 0.0;
            try {
                speedup = std::stod(speedup_text);
            } catch (const std::exception&) {
                throw IoError("speedup table line " + std::to_string(line_no) +
                              ": bad speedup '" + speedup_text + "'");
            }
            if (!std::isfinite(speedup) || speedup < 0) {
                throw IoError("speedup table line " + std::to_string(line_no) +
                              ": speedup must be finite and >= 0");
            }
            if (set.entries.count(id)) {
                throw IoError("speedup table line " + std::to_string(line_no) +
                              ": duplicate problem '" + id + "'");
            }
            set.entries[id] = speedup;
            continue;
        }
        std::string id, t_ref_text, t_best_text;
        if (!std::getline(row, id, ',') || !std::getline(row, t_ref_text, ',')) {
            throw IoError("speedup table line " + std::to_string(line_no) +
                          ": expected problem_id,t_ref,t_best");
        }
        std::getline(row, t_best_text, ',');
        double t_ref = 0.0;
        try {
            t_ref = std::stod(t_ref_text);
        } catch (const std::exception&) {
            throw IoError("speedup table line " + std::to_string(line_no) + ": bad t_ref '" +
                          t_ref_text + "'");
        }
        if (t_ref <= 0) {
            throw IoError("speedup table line " + std::to_string(line_no) + ": t_ref must be > 0");
        }
        double speedup = convention == UnsolvedConvention::fallback_one ? 1.0 : 0.0;
        if (!t_best_text.empty()) {
            double t_best = 0.0;
            try {
                t_best = std::stod(t_best_text);
            } catch (const std::exception&) {
                throw IoError("speedup table line " + std::to_string(line_no) + ": bad t_best '" +
                              t_best_text + "'");
            }
            if (t_best <= 0) {
                throw IoError("speedup table line " + std::to_string(line_no) +
                              ": t_best must be > 0 when present");
            }
            speedup = t_ref / t_best;
        }
        if (set.entries.count(id)) {
            throw IoError("speedup table line " + std::to_string(line_no) +
                          ": duplicate problem '" + id + "'");
        }
        set.entries[id] = speedup;
    }
    return set;
}

std::string speedup_set_to_csv(const SpeedupSet& set) {
    std::ostringstream out;
    out << "problem_id,speedup\n";
    // max_digits10 so reading the table back reproduces each double exactly.
    out.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& [id, s] : set.entries) out << id << "," << s << "\n";
    return out.str();
}

std::string fast_p_to_csv(const FastPCurve& curve) {
    std::ostringstream out;
    out << "threshold,percent\n";
    out.precision(12);
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        out << curve.thresholds[i] << "," << curve.values[i] << "\n";
    }
    return out.str();
}

std::string attempt_fast_p_to_csv(const AttemptFastPCurve& curve) {
    std::ostringstream out;
    out << "attempts,percent\n";
    out.precision(12);
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        out << (i + 1) << "," << curve.values[i] << "\n";
    }
    return out.str();
}

std::string summary_to_text(const SpeedupSummary& summary) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "problems:        " << summary.count << "\n";
    out << "geomean speedup: " << summary.geomean;
    if (summary.zeros_excluded_from_geomean > 0) {
        out << "  (warning: " << summary.zeros_excluded_from_geomean
            << " zero-speedup entries excluded)";
    }
    out << "\n";
    out << "median speedup:  " << summary.median << "\n";
    for (const auto& [r, count] : summary.count_ge) {
        out << "count >= " << std::setprecision(0) << r << "x:     " << count << "\n"
            << std::setprecision(4);
    }
    return out.str();
}

}  // namespace ucutlass
