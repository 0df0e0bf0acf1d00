#include "ucutlass/validate.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace ucutlass {

const char* to_string(Severity severity) {
    return severity == Severity::error ? "error" : "warning";
}

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(
        std::count_if(diagnostics.begin(), diagnostics.end(),
                      [](const Diagnostic& d) { return d.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const {
    return diagnostics.size() - error_count();
}

bool ValidationReport::has_rule(const std::string& rule_id, Severity severity) const {
    return std::any_of(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic& d) {
        return d.rule_id == rule_id && d.severity == severity;
    });
}

namespace {

struct ArchBand {
    int min = 70;
    int max = 90;  // inclusive; 90 covers sm_90 and sm_90a

    bool contains(int level) const { return level >= min && level <= max; }
    std::string describe() const {
        if (max >= 90) return "SM" + std::to_string(min) + "+";
        return "SM" + std::to_string(min) + "-" + std::to_string(max);
    }
};

ArchBand op_band(OpKind op) {
    switch (op) {
        case OpKind::gemm: return {70, 90};
        case OpKind::grouped_gemm: return {80, 90};
        case OpKind::conv1d: return {70, 90};
        case OpKind::conv2d: return {70, 90};
        case OpKind::conv3d: return {70, 90};
        case OpKind::conv2d_dgrad: return {70, 90};
        case OpKind::conv2d_wgrad: return {70, 90};
        case OpKind::conv3d_dgrad: return {70, 90};
        case OpKind::conv3d_wgrad: return {70, 89};
        case OpKind::depthwise_conv: return {70, 90};  // SM90+ runs via the CuTe backend
        case OpKind::grouped_conv: return {80, 89};
    }
    return {70, 90};
}

class Checker {
  public:
    explicit Checker(const KernelConfig& config) : c_(config), level_(arch_level(config.arch)) {}

    void Run(ValidationReport& report) {
        report_ = &report;
        CheckR1();
        CheckR2();
        CheckR3();
        CheckR4();
        CheckR5();
        CheckR6();
        CheckR8();
    }

  private:
    void Add(Severity severity, const char* rule, std::string field, std::string message) {
        report_->diagnostics.push_back(
            Diagnostic{severity, rule, std::move(field), std::move(message)});
    }

    std::string NearestArch(const ArchBand& band) const {
        if (level_ < band.min) return "sm_" + std::to_string(band.min);
        return "sm_" + std::to_string(band.max);
    }

    void CheckR1() {
        ArchBand band = op_band(c_.op_kind);
        if (band.contains(level_)) return;
        std::string op = to_string(c_.op_kind);
        std::string message;
        if (c_.op_kind == OpKind::conv3d_wgrad && level_ > 89) {
            message = "Conv3d wgrad unsupported on SM90+: the weight-gradient 3D kernel "
                      "exists only for " + band.describe() +
                      "; nearest legal arch is " + NearestArch(band);
        } else {
            message = op + " is not available on " + to_string(c_.arch) +
                      ": supported range is " + band.describe() +
                      "; nearest legal arch is " + NearestArch(band);
        }
        Add(Severity::error, "R1", "op_kind", std::move(message));
    }

    void FeatureRange(const char* feature, const char* field, bool present, ArchBand band) {
        if (!present || band.contains(level_)) return;
        Add(Severity::error, "R2", field,
            std::string(feature) + " is not available on " + to_string(c_.arch) +
                ": it applies to " + band.describe() + "; nearest legal arch is " +
                NearestArch(band));
    }

    void CheckR2() {
        FeatureRange("with_tile", "tile", c_.tile.has_value(), {70, 89});
        FeatureRange("with_threadblockshape", "threadblock_shape",
                     c_.threadblock_shape.has_value(), {90, 90});
        FeatureRange("with_cluster", "cluster", c_.cluster.has_value(), {90, 90});
        FeatureRange("with_scheduler", "scheduler", c_.scheduler.has_value(), {90, 90});
        FeatureRange("with_swizzle", "swizzle", c_.swizzle.has_value(), {70, 89});
        FeatureRange("with_iterator", "iterator", c_.iterator.has_value(), {70, 89});
        FeatureRange("with_split_k", "split_k", c_.split_k.has_value(), {70, 89});

        bool has_custom = std::any_of(c_.epilogue.begin(), c_.epilogue.end(),
                                      [](const EpilogueNode& node) {
                                          return node.name == EpilogueName::custom;
                                      });
        if (has_custom && !is_arch_90a(c_.arch)) {
            Add(Severity::error, "R2", "epilogue",
                "custom epilogues compile through the Epilogue Visitor Tree and require "
                "sm_90a; nearest legal arch is sm_90a");
        }

        if (c_.operand_swap.has_value()) {
            bool bad = false;
            if (level_ < 90) {
                Add(Severity::error, "R2", "operand_swap",
                    "with_operand_swap requires SM90+: the swapped-operand path exists "
                    "only in the SM90 collective builder; nearest legal arch is sm_90");
                bad = true;
            }
            if (c_.dtypes.input != DType::fp32) {
                Add(Severity::error, "R2", "operand_swap",
                    "with_operand_swap applies only to fp32 inputs, got " +
                        std::string(to_string(c_.dtypes.input)) +
                        "; drop the binding or use with_dtype(input=fp32)");
                bad = true;
            }
            if (c_.op_kind != OpKind::gemm) {
                Add(Severity::error, "R2", "operand_swap",
                    "with_operand_swap applies only to gemm, got " +
                        std::string(to_string(c_.op_kind)) + "; drop the binding");
                bad = true;
            }
            if (!bad) {
                Add(Severity::warning, "R2", "operand_swap",
                    "operand_swap requires square problems (M == N); this cannot be "
                    "checked statically, so the generated entrypoint asserts M == N at "
                    "runtime");
            }
        }
    }

    void CheckR3() {
        auto needs90 = [&](DType dtype, const char* field) {
            if (dtype == DType::fp8 && level_ < 90) {
                Add(Severity::error, "R3", field,
                    "fp8 requires SM90+: pre-SM90 tensor cores have no fp8 path; use "
                    "fp16 or bf16 on " + std::string(to_string(c_.arch)));
            }
        };
        needs90(c_.dtypes.input, "dtypes.input");
        needs90(c_.dtypes.acc, "dtypes.acc");
        needs90(c_.dtypes.output, "dtypes.output");
    }

    void CheckR4() {
        if (c_.tile && c_.threadblock_shape) {
            Add(Severity::error, "R4", "tile",
                "with_tile and with_threadblockshape are mutually exclusive: tile "
                "drives the SM70-89 template path and threadblock_shape the SM90+ "
                "collective path; keep the one matching the target arch");
        }
    }

    void CheckR5() {
        for (std::size_t i = 0; i < c_.epilogue.size(); ++i) {
            const EpilogueNode& node = c_.epilogue[i];
            std::string field = "epilogue[" + std::to_string(i) + "]";
            std::string name = to_string(node.name);
            if (node.name == EpilogueName::clip || node.name == EpilogueName::clamp) {
                const Value* min = FindParam(node, "min");
                const Value* max = FindParam(node, "max");
                if (!min || !max) {
                    Add(Severity::error, "R5", field,
                        name + " requires both min and max, e.g. " + name +
                            "(min=0, max=6)");
                }
                RejectUnknown(node, field, {"min", "max"});
                if (min && max && min->is_int() && max->is_int() &&
                    min->integer() > max->integer()) {
                    Add(Severity::error, "R5", field,
                        name + ": min (" + std::to_string(min->integer()) +
                            ") must be <= max (" + std::to_string(max->integer()) + ")");
                }
            } else if (node.name == EpilogueName::leaky_relu) {
                if (!FindParam(node, "slope")) {
                    Add(Severity::error, "R5", field,
                        "leaky_relu requires slope, e.g. leaky_relu(slope=1)");
                }
                RejectUnknown(node, field, {"slope"});
            } else if (node.name == EpilogueName::custom) {
                RejectUnknown(node, field, {});
            } else {
                // Everything else — activations, bias, the scale variants, aux ops —
                // takes no numeric bounds; their data arrives through the extended
                // entrypoint's auxiliary tensor parameters.
                RejectUnknown(node, field, {});
            }
        }
    }

    static const Value* FindParam(const EpilogueNode& node, const std::string& key) {
        auto it = node.params.find(key);
        return it == node.params.end() ? nullptr : &it->second;
    }

    void RejectUnknown(const EpilogueNode& node, const std::string& field,
                       const std::set<std::string>& allowed) {
        for (const auto& [key, value] : node.params) {
            if (!allowed.count(key)) {
                std::string hint = allowed.empty()
                                       ? std::string("this epilogue takes no parameters")
                                       : "allowed parameters: " + Join(allowed);
                Add(Severity::error, "R5", field,
                    std::string(to_string(node.name)) + ": unknown parameter '" + key +
                        "'; " + hint);
            }
        }
    }

    static std::string Join(const std::set<std::string>& items) {
        std::string out;
        for (const std::string& item : items) {
            if (!out.empty()) out += ", ";
            out += item;
        }
        return out;
    }

    void CheckR6() {
        if (c_.op_kind != OpKind::depthwise_conv || level_ < 90) return;
        Add(Severity::warning, "R6", "op_kind",
            "depthwise_conv on SM90+ uses the CuTe backend, which has limited "
            "stride/dilation and epilogue support");
        for (std::size_t i = 0; i < c_.epilogue.size(); ++i) {
            if (c_.epilogue[i].name != EpilogueName::relu) {
                Add(Severity::error, "R6", "epilogue[" + std::to_string(i) + "]",
                    "depthwise_conv on SM90+ supports an empty or relu-only epilogue; "
                    "remove " + std::string(to_string(c_.epilogue[i].name)) +
                        " or target sm_89");
            }
        }
    }

    void CheckR8() {
        CheckAlignment(c_.alignment.a, "alignment.A", c_.dtypes.input);
        CheckAlignment(c_.alignment.b, "alignment.B", c_.dtypes.input);
        CheckAlignment(c_.alignment.c, "alignment.C", c_.dtypes.output);
    }

    void CheckAlignment(std::int64_t value, const char* field, DType dtype) {
        if (value == 0) {
            Add(Severity::error, "R8", field,
                "alignment 0 is invalid: alignment is a vector width in elements and "
                "must be >= 1");
            return;
        }
        bool pow2 = (value & (value - 1)) == 0;
        if (!pow2) {
            Add(Severity::warning, "R8", field,
                "alignment " + std::to_string(value) +
                    " is not a power of two; vectorized access wants 1, 2, 4, 8, or 16");
        }
        if (value > 16) {
            Add(Severity::warning, "R8", field,
                "alignment " + std::to_string(value) +
                    " exceeds 16 elements; the widest supported vector access is 16");
        } else if (pow2 && value > 8 && dtype == DType::fp32) {
            Add(Severity::warning, "R8", field,
                "alignment " + std::to_string(value) +
                    " with fp32 exceeds the 32-byte vector width; 8 or less is typical "
                    "for fp32 operands");
        }
    }

    const KernelConfig& c_;
    int level_;
    ValidationReport* report_ = nullptr;
};

void CheckR7(const PipelineConfig& config, ValidationReport& report) {
    if (config.pre_transforms.empty()) return;
    const TransformStage& last = config.pre_transforms.back();
    if (!last.convert_dtype) return;
    if (*last.convert_dtype != config.kernel.dtypes.input) {
        report.diagnostics.push_back(Diagnostic{
            Severity::error, "R7", "pipeline",
            std::string("pipeline dtype chain mismatch: the last pre-transform converts "
                        "to ") +
                to_string(*last.convert_dtype) + " but the kernel consumes " +
                to_string(config.kernel.dtypes.input) +
                "; align transpose(dtype=...) with with_dtype(input=...)"});
    }
}

}  // namespace

ValidationReport validate(const KernelConfig& config) {
    ValidationReport report;
    Checker(config).Run(report);
    report.ok = report.error_count() == 0;
    return report;
}

ValidationReport validate(const PipelineConfig& config) {
    ValidationReport report;
    Checker(config.kernel).Run(report);
    CheckR7(config, report);
    report.ok = report.error_count() == 0;
    return report;
}

ValidationReport validate(const AnyConfig& config) {
    if (std::holds_alternative<KernelConfig>(config)) {
        return validate(std::get<KernelConfig>(config));
    }
    return validate(std::get<PipelineConfig>(config));
}

std::string report_to_jsonl(const ValidationReport& report) {
    std::ostringstream out;
    for (const Diagnostic& d : report.diagnostics) {
        nlohmann::json record = {
            {"severity", to_string(d.severity)},
            {"rule_id", d.rule_id},
            {"field", d.field},
            {"message", d.message},
        };
        out << record.dump() << "\n";
    }
    return out.str();
}

}  // namespace ucutlass
