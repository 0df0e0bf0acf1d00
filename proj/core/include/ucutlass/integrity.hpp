#pragma once

// Integrity pipeline: SOL-ceiling detector, profile-based PyTorch-only
// detector, and combination of detector flags with external reviewer labels
// into final per-attempt outcomes that gate speedup reporting.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucutlass/diagnostics.hpp"
#include "ucutlass/logs.hpp"
#include "ucutlass/metrics.hpp"

namespace ucutlass {

enum class OutcomeLabel {
    NoIssues,
    MinorIssues,
    SolCeiling,
    PyTorchOnly,
    OriginalGaming,
    InheritedGaming,
};

std::string to_string(OutcomeLabel label);

enum class Subcategory {
    // minor-issue subcategories
    minor_math_approximation,
    cached_parameter,
    contiguity_assumption,
    uses_default_stream,
    // gaming subcategories
    benchmark_input_exploitation,
    constant_hardcoded_output,
    skipped_computation_step,
    fake_transpose,
    incomplete_computation,
};

std::string to_string(Subcategory subcategory);
Subcategory subcategory_from_string(const std::string& text);  // LabelError on unknown
bool is_minor_subcategory(Subcategory subcategory);
bool is_gaming_subcategory(Subcategory subcategory);

struct ReviewOutcome {
    OutcomeLabel label = OutcomeLabel::NoIssues;
    // Present only for MinorIssues and OriginalGaming (inherited gaming drops
    // the original's subcategory; detector labels have none).
    std::optional<Subcategory> subcategory;
    bool accepted = true;  // true iff label is NoIssues or MinorIssues

    bool operator==(const ReviewOutcome&) const = default;
};

// What an external reviewer may say about one attempt.
struct ReviewerLabel {
    enum class Kind { NoIssues, MinorIssues, Gaming };
    Kind kind = Kind::NoIssues;
    std::optional<Subcategory> subcategory;

    bool operator==(const ReviewerLabel&) const = default;
};

std::string to_string(ReviewerLabel::Kind kind);
ReviewerLabel::Kind reviewer_kind_from_string(const std::string& text);  // LabelError

// --- detectors ---------------------------------------------------------

// Flagged iff runtime_s < 0.9 * t_sol_fp16 (strictly more than 10% below the
// bound; equality at the 0.9 boundary is not flagged). DomainError unless
// both inputs are positive.
bool sol_ceiling_check(double runtime_s, double t_sol_fp16);

struct ProfileLog {
    std::vector<std::string> kernel_names;  // in launch order
    std::string raw_text;
};

// Parse an NCU summary-table profile: locates the "Kernel Name" column via
// the header row and its dashed separator, then reads one kernel name per
// data row. Throws ProfileParseError when the table is missing or empty.
ProfileLog parse_ncu_summary(const std::string& text);

struct PatternConfig {
    std::vector<std::string> library_patterns;  // substring matches
    std::vector<std::string> user_patterns;     // user-kernel allowlist
};

PatternConfig default_patterns();
// {"library_patterns": [...], "user_patterns": [...]}; IoError on bad input.
PatternConfig patterns_from_json(const std::string& text);

// Flagged iff every kernel name matches at least one library pattern and
// none matches the user allowlist. Throws ProfileParseError on an empty
// profile and DomainError on an empty library pattern list.
bool pytorch_only_check(const ProfileLog& profile, const PatternConfig& patterns);

// --- combination --------------------------------------------------------

// Precedence: pytorch_only > ceiling > reviewer Gaming (Inherited when an
// earlier attempt of the same problem was labeled gaming, else Original) >
// reviewer MinorIssues > NoIssues. Throws LabelError when a reviewer
// subcategory does not belong to the reviewer label's family.
ReviewOutcome combine(bool ceiling,
                      bool pytorch_only,
                      const std::optional<ReviewerLabel>& reviewer,
                      bool prior_attempt_gaming);

struct ReviewerRecord {
    std::string problem_id;
    int index = 0;
    ReviewerLabel label;
};

// JSONL: {"problem_id":..., "index":N, "label":"NoIssues"|"MinorIssues"|
// "Gaming", "subcategory": "..."?}. LabelError on unknown labels or
// mismatched subcategory families; IoError on malformed JSON.
std::vector<ReviewerRecord> labels_from_jsonl(const std::string& text);

struct AttemptEvidence {
    std::optional<bool> pytorch_only;       // from a profile, when one exists
    std::optional<ReviewerLabel> reviewer;  // from the label file
};

// problem_id -> attempt index -> evidence
using EvidenceMap = std::map<std::string, std::map<int, AttemptEvidence>>;

EvidenceMap evidence_from_labels(const std::vector<ReviewerRecord>& labels);

struct AttemptOutcomeRow {
    std::string problem_id;
    int index = 0;
    ReviewOutcome outcome;

    bool operator==(const AttemptOutcomeRow&) const = default;
};

// Run detectors + combination over a whole run. The ceiling detector uses
// each problem's t_sol (the FP16 scheduling bound) against measured attempt
// runtimes; attempts without a measurement cannot be ceiling-flagged.
// Gaming inheritance considers only earlier attempts of the same problem.
std::vector<AttemptOutcomeRow> review_run(const std::vector<ProblemLog>& logs,
                                          const EvidenceMap& evidence);

// Recompute per-problem t_best over accepted attempts only; problems with no
// accepted correct attempt follow the unsolved convention. Throws LabelError
// if an attempt has no outcome row.
SpeedupSet filter_speedups(const std::vector<ProblemLog>& logs,
                           const std::vector<AttemptOutcomeRow>& outcomes,
                           UnsolvedConvention convention = UnsolvedConvention::fallback_one);

std::string outcomes_to_csv(const std::vector<AttemptOutcomeRow>& outcomes);

}  // namespace ucutlass
