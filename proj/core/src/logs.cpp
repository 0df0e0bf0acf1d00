#include "ucutlass/logs.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <sstream>

namespace ucutlass {

std::string to_string(ScheduleUnit unit) {
    return unit == ScheduleUnit::attempt ? "attempt" : "iteration";
}

ScheduleUnit schedule_unit_from_string(const std::string& text) {
    if (text == "attempt") return ScheduleUnit::attempt;
    if (text == "iteration") return ScheduleUnit::iteration;
    throw LogError("unknown schedule unit '" + text + "'; expected 'attempt' or 'iteration'");
}

namespace {

ProblemLog parse_problem_record(const nlohmann::json& j, std::size_t line_no) {
    ProblemLog log;
    log.problem_id = j.at("problem_id").get<std::string>();
    log.t_ref = j.at("t_ref").get<double>();
    log.t_sol = j.at("t_sol").get<double>();
    if (j.contains("unit")) {
        log.unit = schedule_unit_from_string(j.at("unit").get<std::string>());
    }
    if (j.contains("iteration_shape") && !j.at("iteration_shape").is_null()) {
        const nlohmann::json& s = j.at("iteration_shape");
        IterationShape shape;
        shape.iterations = s.at("iterations").get<int>();
        shape.hypotheses_per_iter = s.at("hypotheses_per_iter").get<int>();
        shape.attempts_per_hypothesis = s.at("attempts_per_hypothesis").get<int>();
        log.iteration_shape = shape;
    }
    if (log.t_ref <= 0 || log.t_sol <= 0) {
        throw LogError("line " + std::to_string(line_no) + ": problem '" + log.problem_id +
                       "' requires t_ref > 0 and t_sol > 0");
    }
    return log;
}

AttemptRecord parse_attempt_record(const nlohmann::json& j, std::size_t line_no) {
    AttemptRecord a;
    a.problem_id = j.at("problem_id").get<std::string>();
    a.index = j.at("index").get<int>();
    if (j.contains("runtime_s") && !j.at("runtime_s").is_null()) {
        a.runtime_s = j.at("runtime_s").get<double>();
        if (*a.runtime_s <= 0) {
            throw LogError("line " + std::to_string(line_no) +
                           ": attempt runtime_s must be > 0 when present");
        }
    }
    a.correct = j.at("correct").get<bool>();
    a.tokens = j.at("tokens").get<std::int64_t>();
    a.excluded_by_integrity = j.value("excluded_by_integrity", false);
    if (a.index < 1) {
        throw LogError("line " + std::to_string(line_no) + ": attempt index must be >= 1");
    }
    if (a.tokens < 0) {
        throw LogError("line " + std::to_string(line_no) + ": attempt tokens must be >= 0");
    }
    return a;
}

}  // namespace

std::vector<ProblemLog> run_logs_from_jsonl(const std::string& text) {
    std::vector<ProblemLog> logs;
    std::map<std::string, std::size_t> index_of;  // problem_id -> position in logs

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw LogError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
        }
        try {
            const std::string type = j.at("type").get<std::string>();
            if (type == "problem") {
                ProblemLog log = parse_problem_record(j, line_no);
                if (index_of.count(log.problem_id)) {
                    throw LogError("line " + std::to_string(line_no) + ": duplicate problem '" +
                                   log.problem_id + "'");
                }
                index_of[log.problem_id] = logs.size();
                logs.push_back(std::move(log));
            } else if (type == "attempt") {
                AttemptRecord a = parse_attempt_record(j, line_no);
                auto it = index_of.find(a.problem_id);
                if (it == index_of.end()) {
                    throw LogError("line " + std::to_string(line_no) + ": attempt for unknown problem '" +
                                   a.problem_id + "' (problem record must come first)");
                }
                ProblemLog& log = logs[it->second];
                if (!log.attempts.empty() && a.index <= log.attempts.back().index) {
                    throw LogError("line " + std::to_string(line_no) + ": attempt index " +
                                   std::to_string(a.index) + " for problem '" + a.problem_id +
                                   "' is not strictly increasing");
                }
                log.attempts.push_back(std::move(a));
            } else {
                throw LogError("line " + std::to_string(line_no) + ": unknown record type '" +
                               type + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw LogError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    validate_run_logs(logs);
    return logs;
}

std::string run_logs_to_jsonl(const std::vector<ProblemLog>& logs) {
    std::ostringstream out;
    for (const ProblemLog& log : logs) {
        nlohmann::json j = {
            {"type", "problem"},
            {"problem_id", log.problem_id},
            {"t_ref", log.t_ref},
            {"t_sol", log.t_sol},
            {"unit", to_string(log.unit)},
        };
        if (log.iteration_shape) {
            j["iteration_shape"] = {
                {"iterations", log.iteration_shape->iterations},
                {"hypotheses_per_iter", log.iteration_shape->hypotheses_per_iter},
                {"attempts_per_hypothesis", log.iteration_shape->attempts_per_hypothesis},
            };
        }
        out << j.dump() << "\n";
        for (const AttemptRecord& a : log.attempts) {
            nlohmann::json ja = {
                {"type", "attempt"},
                {"problem_id", a.problem_id},
                {"index", a.index},
                {"correct", a.correct},
                {"tokens", a.tokens},
                {"excluded_by_integrity", a.excluded_by_integrity},
            };
            if (a.runtime_s) {
                ja["runtime_s"] = *a.runtime_s;
            } else {
                ja["runtime_s"] = nullptr;
            }
            out << ja.dump() << "\n";
        }
    }
    return out.str();
}

void validate_run_logs(const std::vector<ProblemLog>& logs) {
    for (const ProblemLog& log : logs) {
        if (log.t_ref <= 0 || log.t_sol <= 0) {
            throw LogError("problem '" + log.problem_id + "' requires t_ref > 0 and t_sol > 0");
        }
        int prev_index = 0;
        for (const AttemptRecord& a : log.attempts) {
            if (a.problem_id != log.problem_id) {
                throw LogError("attempt problem_id '" + a.problem_id +
                               "' does not match its log '" + log.problem_id + "'");
            }
            if (a.index <= prev_index) {
                throw LogError("problem '" + log.problem_id +
                               "': attempt indices must be strictly increasing");
            }
            prev_index = a.index;
        }
        if (log.unit == ScheduleUnit::iteration) {
            if (!log.iteration_shape) {
                throw LogError("problem '" + log.problem_id +
                               "': unit=iteration requires iteration_shape");
            }
            const IterationShape& s = *log.iteration_shape;
            if (s.iterations < 1 || s.hypotheses_per_iter < 1 || s.attempts_per_hypothesis < 1) {
                throw LogError("problem '" + log.problem_id +
                               "': iteration_shape fields must be >= 1");
            }
            const std::size_t capacity =
                static_cast<std::size_t>(s.iterations) *
                static_cast<std::size_t>(s.attempts_per_iteration());
            if (log.attempts.size() > capacity) {
                throw LogError("problem '" + log.problem_id + "': " +
                               std::to_string(log.attempts.size()) +
                               " attempts exceed iteration_shape capacity " +
                               std::to_string(capacity));
            }
        }
    }
}

}  // namespace ucutlass
