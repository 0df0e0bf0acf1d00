#pragma once

#include <string>
#include <vector>

#include "ucutlass/config.hpp"

namespace ucutlass {

enum class Severity { error, warning };

const char* to_string(Severity severity);

struct Diagnostic {
    Severity severity = Severity::error;
    std::string rule_id;  // "R1".."R8"
    std::string field;    // config field the rule fired on
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
    bool ok = true;  // true iff no error-severity diagnostics
    std::vector<Diagnostic> diagnostics;

    std::size_t error_count() const;
    std::size_t warning_count() const;
    bool has_rule(const std::string& rule_id, Severity severity) const;
};

// Applies the complete rule table (R1..R8) and reports every violated rule,
// not just the first. Never throws; all results are diagnostics.
ValidationReport validate(const AnyConfig& config);
ValidationReport validate(const KernelConfig& config);
ValidationReport validate(const PipelineConfig& config);

// One JSON object per line: {"severity":..,"rule_id":..,"field":..,"message":..}
std::string report_to_jsonl(const ValidationReport& report);

}  // namespace ucutlass
