#pragma once

#include <string>
#include <vector>

#include "ucutlass/config.hpp"
#include "ucutlass/hash.hpp"

namespace ucutlass {

enum class Backend {
    collective_builder,  // SM90+ GEMM family
    legacy_template,     // SM70-89, and conv on every arch
    cute_depthwise,      // SM90+ depthwise
};

const char* to_string(Backend backend);

struct EmittedArtifact {
    std::string filename;  // "ucutlass_" + 16 hex + ".h"
    std::string text;
    Backend backend = Backend::legacy_template;
    std::vector<std::string> entrypoints;
};

// Which backend a validated config compiles through.
Backend select_backend(const KernelConfig& config);

// Emits the CUTLASS C++ header text for one kernel config. Deterministic pure
// text generation; the output is never compiled by this tool. Throws EmitError
// if the config does not validate cleanly (programming-error guard).
EmittedArtifact emit(const KernelConfig& config, const ConfigHash& hash,
                     const std::string& source_text);

// Pipeline variant: one transform function per transform stage plus a driver
// invoking the stages in order around the kernel stage.
EmittedArtifact emit_pipeline(const PipelineConfig& config, const ConfigHash& hash,
                              const std::string& source_text);

// Convenience: hashes the config and dispatches on its kind.
EmittedArtifact emit(const AnyConfig& config);

// Lightweight structural scanner (not a C++ parser): brace/paren balance and
// namespace open/close pairing, with comments and string literals skipped.
struct LintResult {
    bool braces_balanced = false;
    bool parens_balanced = false;
    int namespace_opens = 0;
    int namespace_closes = 0;

    bool ok() const {
        return braces_balanced && parens_balanced && namespace_opens == namespace_closes;
    }
};

LintResult lint_structure(const std::string& text);

}  // namespace ucutlass
