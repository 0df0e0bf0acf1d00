#include "ucutlass/integrity.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace ucutlass {

std::string to_string(OutcomeLabel label) {
    switch (label) {
        case OutcomeLabel::NoIssues: return "NoIssues";
        case OutcomeLabel::MinorIssues: return "MinorIssues";
        case OutcomeLabel::SolCeiling: return "SolCeiling";
        case OutcomeLabel::PyTorchOnly: return "PyTorchOnly";
        case OutcomeLabel::OriginalGaming: return "OriginalGaming";
        case OutcomeLabel::InheritedGaming: return "InheritedGaming";
    }
    return "NoIssues";
}

namespace {

const std::vector<std::pair<Subcategory, std::string>>& subcategory_names() {
    static const std::vector<std::pair<Subcategory, std::string>> names = {
        {Subcategory::minor_math_approximation, "minor_math_approximation"},
        {Subcategory::cached_parameter, "cached_parameter"},
        {Subcategory::contiguity_assumption, "contiguity_assumption"},
        {Subcategory::uses_default_stream, "uses_default_stream"},
        {Subcategory::benchmark_input_exploitation, "benchmark_input_exploitation"},
        {Subcategory::constant_hardcoded_output, "constant_hardcoded_output"},
        {Subcategory::skipped_computation_step, "skipped_computation_step"},
        {Subcategory::fake_transpose, "fake_transpose"},
        {Subcategory::incomplete_computation, "incomplete_computation"},
    };
    return names;
}

}  // namespace

std::string to_string(Subcategory subcategory) {
    for (const auto& [value, name] : subcategory_names()) {
        if (value == subcategory) return name;
    }
    return "";
}

Subcategory subcategory_from_string(const std::string& text) {
    for (const auto& [value, name] : subcategory_names()) {
        if (name == text) return value;
    }
    throw LabelError("unknown subcategory '" + text + "'");
}

bool is_minor_subcategory(Subcategory subcategory) {
    switch (subcategory) {
        case Subcategory::minor_math_approximation:
        case Subcategory::cached_parameter:
        case Subcategory::contiguity_assumption:
        case Subcategory::uses_default_stream:
            return true;
        default:
            return false;
    }
}

bool is_gaming_subcategory(Subcategory subcategory) {
    return !is_minor_subcategory(subcategory);
}

std::string to_string(ReviewerLabel::Kind kind) {
    switch (kind) {
        case ReviewerLabel::Kind::NoIssues: return "NoIssues";
        case ReviewerLabel::Kind::MinorIssues: return "MinorIssues";
        case ReviewerLabel::Kind::Gaming: return "Gaming";
    }
    return "NoIssues";
}

ReviewerLabel::Kind reviewer_kind_from_string(const std::string& text) {
    if (text == "NoIssues") return ReviewerLabel::Kind::NoIssues;
    if (text == "MinorIssues") return ReviewerLabel::Kind::MinorIssues;
    if (text == "Gaming") return ReviewerLabel::Kind::Gaming;
    throw LabelError("unknown reviewer label '" + text +
                     "'; expected NoIssues, MinorIssues, or Gaming");
}

bool sol_ceiling_check(double runtime_s, double t_sol_fp16) {
    if (runtime_s <= 0 || t_sol_fp16 <= 0) {
        throw DomainError("sol_ceiling_check requires positive runtime and SOL bound");
    }
    return runtime_s < 0.9 * t_sol_fp16;
}

namespace {

bool is_separator_line(const std::string& line) {
    bool saw_dash = false;
    for (char c : line) {
        if (c == '-') {
            saw_dash = true;
        } else if (c != ' ' && c != '\t' && c != '\r') {
            return false;
        }
    }
    return saw_dash;
}

std::string trim(const std::string& text) {
    const std::size_t begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const std::size_t end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

}  // namespace

ProfileLog parse_ncu_summary(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(line);
        }
    }

    // Find the header row and the dashed separator beneath it; the dash runs
    // of the separator give the column extents.
    std::size_t header_row = std::string::npos;
    std::size_t separator_row = std::string::npos;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        if (lines[i].find("Kernel Name") == std::string::npos) continue;
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (trim(lines[j]).empty()) continue;
            if (is_separator_line(lines[j])) {
                header_row = i;
                separator_row = j;
            }
            break;
        }
        if (header_row != std::string::npos) break;
    }
    if (header_row == std::string::npos) {
        throw ProfileParseError(
            "no summary table found (expected a 'Kernel Name' header over a dashed separator)");
    }

    const std::string& separator = lines[separator_row];
    std::vector<std::pair<std::size_t, std::size_t>> columns;  // [start, end)
    for (std::size_t i = 0; i < separator.size();) {
        if (separator[i] != '-') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < separator.size() && separator[i] == '-') ++i;
        columns.emplace_back(start, i);
    }
    const std::size_t name_pos = lines[header_row].find("Kernel Name");
    std::size_t name_col = std::string::npos;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const std::size_t next_start =
            c + 1 < columns.size() ? columns[c + 1].first : std::string::npos;
        if (name_pos >= columns[c].first && name_pos < next_start) {
            name_col = c;
            break;
        }
    }
    if (name_col == std::string::npos) {
        throw ProfileParseError("'Kernel Name' header does not align with any table column");
    }

    ProfileLog profile;
    profile.raw_text = text;
    for (std::size_t i = separator_row + 1; i < lines.size(); ++i) {
        const std::string& row = lines[i];
        if (trim(row).empty()) break;  // blank line ends the table
        // A kernel-name column extends to the start of the next column (names
        // contain spaces); the last column extends to end of line.
        const std::size_t start = std::min(columns[name_col].first, row.size());
        const std::size_t end = name_col + 1 < columns.size()
                                    ? std::min(columns[name_col + 1].first, row.size())
                                    : row.size();
        const std::string name = trim(row.substr(start, end - start));
        if (!name.empty()) profile.kernel_names.push_back(name);
    }
    if (profile.kernel_names.empty()) {
        throw ProfileParseError("summary table contains no kernel rows");
    }
    return profile;
}

PatternConfig default_patterns() {
    PatternConfig patterns;
    patterns.library_patterns = {"at::native::", "cublas", "cudnn", "at::cuda",
                                 "vectorized_elementwise"};
    patterns.user_patterns = {"ucutlass_"};
    return patterns;
}

PatternConfig patterns_from_json(const std::string& text) {
    PatternConfig patterns;
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        for (const auto& p : j.at("library_patterns")) {
            patterns.library_patterns.push_back(p.get<std::string>());
        }
        for (const auto& p : j.value("user_patterns", nlohmann::json::array())) {
            patterns.user_patterns.push_back(p.get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("patterns config: ") + e.what());
    }
    if (patterns.library_patterns.empty()) {
        throw IoError("patterns config: library_patterns must be nonempty");
    }
    return patterns;
}

bool pytorch_only_check(const ProfileLog& profile, const PatternConfig& patterns) {
    if (profile.kernel_names.empty()) {
        throw ProfileParseError("profile has no kernel names (empty or unparsed log)");
    }
    if (patterns.library_patterns.empty()) {
        throw DomainError("pytorch_only_check requires a nonempty library pattern list");
    }
    auto matches_any = [](const std::string& name, const std::vector<std::string>& pats) {
        return std::any_of(pats.begin(), pats.end(), [&](const std::string& p) {
            return !p.empty() && name.find(p) != std::string::npos;
        });
    };
    for (const std::string& name : profile.kernel_names) {
        if (matches_any(name, patterns.user_patterns)) return false;  // user kernel ran
        if (!matches_any(name, patterns.library_patterns)) return false;  // unknown kernel
    }
    return true;
}

namespace {

ReviewOutcome make_outcome(OutcomeLabel label, std::optional<Subcategory> subcategory) {
    ReviewOutcome outcome;
    outcome.label = label;
    outcome.subcategory = subcategory;
    outcome.accepted =
        label == OutcomeLabel::NoIssues || label == OutcomeLabel::MinorIssues;
    return outcome;
}

void check_reviewer_label(const ReviewerLabel& reviewer) {
    if (!reviewer.subcategory) {
        return;
    }
    switch (reviewer.kind) {
        case ReviewerLabel::Kind::NoIssues:
            throw LabelError("reviewer label NoIssues cannot carry a subcategory");
        case ReviewerLabel::Kind::MinorIssues:
            if (!is_minor_subcategory(*reviewer.subcategory)) {
                throw LabelError("subcategory '" + to_string(*reviewer.subcategory) +
                                 "' is not a minor-issue subcategory");
            }
            break;
        case ReviewerLabel::Kind::Gaming:
            if (!is_gaming_subcategory(*reviewer.subcategory)) {
                throw LabelError("subcategory '" + to_string(*reviewer.subcategory) +
                                 "' is not a gaming subcategory");
            }
            break;
    }
}

}  // namespace

ReviewOutcome combine(bool ceiling,
                      bool pytorch_only,
                      const std::optional<ReviewerLabel>& reviewer,
                      bool prior_attempt_gaming) {
    if (reviewer) check_reviewer_label(*reviewer);
    // Detector precedence keeps the categories mutually exclusive: a run that
    // never launched a user kernel is PyTorch-only even when the reviewer
    // called it gaming.
    if (pytorch_only) return make_outcome(OutcomeLabel::PyTorchOnly, std::nullopt);
    if (ceiling) return make_outcome(OutcomeLabel::SolCeiling, std::nullopt);
    if (reviewer && reviewer->kind == ReviewerLabel::Kind::Gaming) {
        if (prior_attempt_gaming) {
            return make_outcome(OutcomeLabel::InheritedGaming, std::nullopt);
        }
        return make_outcome(OutcomeLabel::OriginalGaming, reviewer->subcategory);
    }
    if (reviewer && reviewer->kind == ReviewerLabel::Kind::MinorIssues) {
        return make_outcome(OutcomeLabel::MinorIssues, reviewer->subcategory);
    }
    return make_outcome(OutcomeLabel::NoIssues, std::nullopt);
}

std::vector<ReviewerRecord> labels_from_jsonl(const std::string& text) {
    std::vector<ReviewerRecord> records;
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
            throw IoError("labels line " + std::to_string(line_no) + ": invalid JSON: " +
                          e.what());
        }
        try {
            ReviewerRecord record;
            record.problem_id = j.at("problem_id").get<std::string>();
            record.index = j.at("index").get<int>();
            record.label.kind = reviewer_kind_from_string(j.at("label").get<std::string>());
            if (j.contains("subcategory") && !j.at("subcategory").is_null()) {
                record.label.subcategory =
                    subcategory_from_string(j.at("subcategory").get<std::string>());
            }
            check_reviewer_label(record.label);
            if (record.index < 1) {
                throw IoError("labels line " + std::to_string(line_no) +
                              ": index must be >= 1");
            }
            records.push_back(std::move(record));
        } catch (const nlohmann::json::exception& e) {
            throw IoError("labels line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

EvidenceMap evidence_from_labels(const std::vector<ReviewerRecord>& labels) {
    EvidenceMap evidence;
    for (const ReviewerRecord& record : labels) {
        AttemptEvidence& slot = evidence[record.problem_id][record.index];
        if (slot.reviewer) {
            throw LabelError("duplicate reviewer label for problem '" + record.problem_id +
                             "' attempt " + std::to_string(record.index));
        }
        slot.reviewer = record.label;
    }
    return evidence;
}

std::vector<AttemptOutcomeRow> review_run(const std::vector<ProblemLog>& logs,
                                          const EvidenceMap& evidence) {
    validate_run_logs(logs);
    std::vector<AttemptOutcomeRow> rows;
    for (const ProblemLog& log : logs) {
        bool prior_gaming = false;  // inheritance is per problem, in attempt order
        const auto problem_evidence = evidence.find(log.problem_id);
        for (const AttemptRecord& attempt : log.attempts) {
            bool ceiling = false;
            if (attempt.runtime_s) {
                ceiling = sol_ceiling_check(*attempt.runtime_s, log.t_sol);
            }
            AttemptEvidence ev;
            if (problem_evidence != evidence.end()) {
                const auto it = problem_evidence->second.find(attempt.index);
                if (it != problem_evidence->second.end()) ev = it->second;
            }
            AttemptOutcomeRow row;
            row.problem_id = log.problem_id;
            row.index = attempt.index;
            row.outcome =
                combine(ceiling, ev.pytorch_only.value_or(false), ev.reviewer, prior_gaming);
            if (row.outcome.label == OutcomeLabel::OriginalGaming ||
                row.outcome.label == OutcomeLabel::InheritedGaming) {
                prior_gaming = true;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

SpeedupSet filter_speedups(const std::vector<ProblemLog>& logs,
                           const std::vector<AttemptOutcomeRow>& outcomes,
                           UnsolvedConvention convention) {
    std::map<std::string, std::map<int, const ReviewOutcome*>> by_attempt;
    for (const AttemptOutcomeRow& row : outcomes) {
        by_attempt[row.problem_id][row.index] = &row.outcome;
    }
    SpeedupSet set;
    set.unsolved_convention = convention;
    for (const ProblemLog& log : logs) {
        double t_best = std::numeric_limits<double>::infinity();
        bool solved = false;
        for (const AttemptRecord& attempt : log.attempts) {
            const auto problem_it = by_attempt.find(log.problem_id);
            const ReviewOutcome* outcome = nullptr;
            if (problem_it != by_attempt.end()) {
                const auto it = problem_it->second.find(attempt.index);
                if (it != problem_it->second.end()) outcome = it->second;
            }
            if (outcome == nullptr) {
                throw LabelError("no outcome for problem '" + log.problem_id + "' attempt " +
                                 std::to_string(attempt.index));
            }
            if (!outcome->accepted) continue;
            if (!attempt.correct || attempt.excluded_by_integrity || !attempt.runtime_s) continue;
            if (*attempt.runtime_s < t_best) {
                t_best = *attempt.runtime_s;
                solved = true;
            }
        }
        if (solved) {
            set.entries[log.problem_id] = log.t_ref / t_best;
        } else {
            set.entries[log.problem_id] =
                convention == UnsolvedConvention::fallback_one ? 1.0 : 0.0;
        }
    }
    return set;
}

std::string outcomes_to_csv(const std::vector<AttemptOutcomeRow>& outcomes) {
    std::ostringstream out;
    out << "problem_id,index,label,subcategory,accepted\n";
    for (const AttemptOutcomeRow& row : outcomes) {
        out << row.problem_id << "," << row.index << "," << to_string(row.outcome.label) << ",";
        if (row.outcome.subcategory) out << to_string(*row.outcome.subcategory);
        out << "," << (row.outcome.accepted ? 1 : 0) << "\n";
    }
    return out.str();
}

}  // namespace ucutlass
