#pragma once

#include <string>
#include <vector>

#include "ucutlass/diagnostics.hpp"

namespace ucutlass {

struct Hypothesis {
    std::string id;
    double est_speedup = 1.0;  // S-hat, > 0
    double risk_impl = 1.0;    // > 0; recommended scale 1-5
    double risk_perf = 1.0;    // > 0; recommended scale 1-5
    std::string description;
};

struct GapContext {
    double t_best = 0.0;  // seconds
    double t_sol = 1.0;   // seconds, > 0

    double gap() const { return t_best / t_sol; }
};

struct RankedHypothesis {
    Hypothesis hypothesis;
    long double roi = 0.0L;
};

// Gap-aware ROI: S^(1 + max(0, log10(g/5))) / (R_impl * R_perf), computed in
// extended precision. g = 0 maps to exponent 1 (the g->0+ limit); g < 0 or
// non-positive S/risks throw DomainError.
long double roi(const Hypothesis& h, const GapContext& ctx);

// Descending ROI; ties broken by higher est_speedup, then id lexicographic.
std::vector<RankedHypothesis> rank(const std::vector<Hypothesis>& hypotheses,
                                   const GapContext& ctx);

// JSONL loaders/serializers: one hypothesis per record in, one ranked row
// (id, est_speedup, risks, roi, description) per record out.
std::vector<Hypothesis> hypotheses_from_jsonl(const std::string& text);
std::string ranked_to_jsonl(const std::vector<RankedHypothesis>& ranked);
std::string ranked_to_csv(const std::vector<RankedHypothesis>& ranked);

}  // namespace ucutlass
