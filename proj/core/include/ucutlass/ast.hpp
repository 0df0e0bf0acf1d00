#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ucutlass/diagnostics.hpp"

namespace ucutlass {

enum class OpName {
    gemm,
    grouped_gemm,
    conv1d,
    conv2d,
    conv3d,
    conv2d_dgrad,
    conv2d_wgrad,
    conv3d_dgrad,
    conv3d_wgrad,
    depthwise_conv,
    grouped_conv,
};

enum class BindingName {
    with_dtype,
    with_layout,
    with_arch,
    with_alignment,
    with_stages,
    with_tile,
    with_threadblockshape,
    with_cluster,
    with_scheduler,
    with_swizzle,
    with_iterator,
    with_split_k,
    with_operand_swap,
};

enum class EpilogueName {
    relu,
    gelu,
    silu,
    sigmoid,
    tanh,
    mish,
    hardswish,
    leaky_relu,
    elu,
    clip,
    clamp,
    bias,
    per_channel_scale,
    per_row_scale,
    per_col_scale,
    scale,
    aux_store,
    aux_load,
    custom,
};

const char* to_string(OpName name);
const char* to_string(BindingName name);
const char* to_string(EpilogueName name);
std::optional<OpName> op_name_from_string(const std::string& text);
std::optional<BindingName> binding_name_from_string(const std::string& text);
std::optional<EpilogueName> epilogue_name_from_string(const std::string& text);
std::vector<OpName> all_op_names();
std::vector<BindingName> all_binding_names();
std::vector<EpilogueName> all_epilogue_names();

// Argument values are identifiers, integers, or booleans — nothing else.
struct Value {
    std::variant<std::string, std::int64_t, bool> v;

    bool is_ident() const { return std::holds_alternative<std::string>(v); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    const std::string& ident() const { return std::get<std::string>(v); }
    std::int64_t integer() const { return std::get<std::int64_t>(v); }
    bool boolean() const { return std::get<bool>(v); }
    std::string to_text() const;  // DSL spelling

    bool operator==(const Value&) const = default;
};

struct Arg {
    std::optional<std::string> key;  // absent for positional args
    Value value;
    Span span;

    bool operator==(const Arg& other) const {
        return key == other.key && value == other.value;
    }
};

struct Binding {
    BindingName name;
    std::vector<Arg> args;
    Span span;

    bool operator==(const Binding& other) const {
        return name == other.name && args == other.args;
    }
};

struct EpilogueOp {
    EpilogueName name;
    std::vector<Arg> args;
    std::optional<std::string> custom_expr;  // present iff name == custom
    std::vector<std::pair<std::string, std::string>> custom_inputs;
    Span span;

    bool operator==(const EpilogueOp& other) const {
        return name == other.name && args == other.args &&
               custom_expr == other.custom_expr && custom_inputs == other.custom_inputs;
    }
};

struct KernelExpr {
    OpName op;
    std::vector<Binding> bindings;
    std::vector<EpilogueOp> epilogue;
    Span span;

    bool operator==(const KernelExpr& other) const {
        return op == other.op && bindings == other.bindings && epilogue == other.epilogue;
    }
};

// A transform stage inside pipeline(...). The only transform is transpose,
// with an optional dtype=<dtype> conversion argument.
struct TransposeStage {
    std::vector<Arg> args;
    Span span;

    bool operator==(const TransposeStage& other) const { return args == other.args; }
};

struct PipelineExpr {
    std::vector<TransposeStage> pre;   // transform stages before the kernel
    KernelExpr kernel;                 // exactly one kernel stage
    std::vector<TransposeStage> post;  // transform stages after the kernel
    Span span;

    bool operator==(const PipelineExpr& other) const {
        return pre == other.pre && kernel == other.kernel && post == other.post;
    }
};

struct DslProgram {
    std::variant<KernelExpr, PipelineExpr> root;
    std::string source_text;

    bool is_pipeline() const { return std::holds_alternative<PipelineExpr>(root); }
    const KernelExpr& kernel() const {
        return is_pipeline() ? std::get<PipelineExpr>(root).kernel
                             : std::get<KernelExpr>(root);
    }

    // Structural equality: spans and original source text are ignored.
    bool operator==(const DslProgram& other) const { return root == other.root; }
};

// Pretty-prints a program back to DSL text. The output preserves binding
// order, argument order, and epilogue order, and re-parses to an equal tree.
std::string print(const DslProgram& program);

}  // namespace ucutlass
