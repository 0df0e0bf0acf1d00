#include "ucutlass/triage.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ucutlass {

long double roi(const Hypothesis& h, const GapContext& ctx) {
    if (h.est_speedup <= 0) {
        throw DomainError("hypothesis '" + h.id + "': est_speedup must be > 0");
    }
    if (h.risk_impl <= 0 || h.risk_perf <= 0) {
        throw DomainError("hypothesis '" + h.id + "': risks must be > 0");
    }
    if (ctx.t_sol <= 0) throw DomainError("gap context: t_sol must be > 0");
    if (ctx.t_best < 0) throw DomainError("gap context: t_best must be >= 0");

    long double g = static_cast<long double>(ctx.t_best) /
                    static_cast<long double>(ctx.t_sol);
    // Exponent 1 + max(0, log10(g/5)); at g == 0 the max-term's limit is 0.
    long double exponent = 1.0L;
    if (g > 0.0L) {
        exponent += std::max(0.0L, std::log10(g / 5.0L));
    }
    long double s = static_cast<long double>(h.est_speedup);
    long double numerator = std::pow(s, exponent);
    return numerator / (static_cast<long double>(h.risk_impl) *
                        static_cast<long double>(h.risk_perf));
}

std::vector<RankedHypothesis> rank(const std::vector<Hypothesis>& hypotheses,
                                   const GapContext& ctx) {
    std::vector<RankedHypothesis> ranked;
    ranked.reserve(hypotheses.size());
    for (const Hypothesis& h : hypotheses) {
        ranked.push_back(RankedHypothesis{h, roi(h, ctx)});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedHypothesis& a, const RankedHypothesis& b) {
                         if (a.roi != b.roi) return a.roi > b.roi;
                         if (a.hypothesis.est_speedup != b.hypothesis.est_speedup) {
                             return a.hypothesis.est_speedup > b.hypothesis.est_speedup;
                         }
                         return a.hypothesis.id < b.hypothesis.id;
                     });
    return ranked;
}

std::vector<Hypothesis> hypotheses_from_jsonl(const std::string& text) {
    std::vector<Hypothesis> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            Hypothesis h;
            h.id = j.at("id").get<std::string>();
            h.est_speedup = j.at("est_speedup").get<double>();
            h.risk_impl = j.at("risk_impl").get<double>();
            h.risk_perf = j.at("risk_perf").get<double>();
            h.description = j.value("description", "");
            if (h.est_speedup <= 0 || h.risk_impl <= 0 || h.risk_perf <= 0) {
                throw IoError("hypotheses line " + std::to_string(line_no) +
                              ": est_speedup and risks must be > 0");
            }
            out.push_back(std::move(h));
        } catch (const nlohmann::json::exception& e) {
            throw IoError("hypotheses line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::string ranked_to_jsonl(const std::vector<RankedHypothesis>& ranked) {
    std::ostringstream out;
    for (const RankedHypothesis& row : ranked) {
        nlohmann::json j = {
            {"id", row.hypothesis.id},
            {"est_speedup", row.hypothesis.est_speedup},
            {"risk_impl", row.hypothesis.risk_impl},
            {"risk_perf", row.hypothesis.risk_perf},
            {"roi", static_cast<double>(row.roi)},
            {"description", row.hypothesis.description},
        };
        out << j.dump() << "\n";
    }
    return out.str();
}

std::string ranked_to_csv(const std::vector<RankedHypothesis>& ranked) {
    std::ostringstream out;
    out << "rank,id,est_speedup,risk_impl,risk_perf,roi\n";
    out.precision(12);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const RankedHypothesis& row = ranked[i];
        out << (i + 1) << "," << row.hypothesis.id << "," << row.hypothesis.est_speedup
            << "," << row.hypothesis.risk_impl << "," << row.hypothesis.risk_perf << ","
            << static_cast<double>(row.roi) << "\n";
    }
    return out.str();
}

}  // namespace ucutlass
