#include "ucutlass/ast.hpp"

#include <sstream>
#include <unordered_map>

namespace ucutlass {

namespace {

// Order here defines the canonical listing order used by all_*_names().
const std::pair<OpName, const char*> kOpNames[] = {
    {OpName::gemm, "gemm"},
    {OpName::grouped_gemm, "grouped_gemm"},
    {OpName::conv1d, "conv1d"},
    {OpName::conv2d, "conv2d"},
    {OpName::conv3d, "conv3d"},
    {OpName::conv2d_dgrad, "conv2d_dgrad"},
    {OpName::conv2d_wgrad, "conv2d_wgrad"},
    {OpName::conv3d_dgrad, "conv3d_dgrad"},
    {OpName::conv3d_wgrad, "conv3d_wgrad"},
    {OpName::depthwise_conv, "depthwise_conv"},
    {OpName::grouped_conv, "grouped_conv"},
};

const std::pair<BindingName, const char*> kBindingNames[] = {
    {BindingName::with_dtype, "with_dtype"},
    {BindingName::with_layout, "with_layout"},
    {BindingName::with_arch, "with_arch"},
    {BindingName::with_alignment, "with_alignment"},
    {BindingName::with_stages, "with_stages"},
    {BindingName::with_tile, "with_tile"},
    {BindingName::with_threadblockshape, "with_threadblockshape"},
    {BindingName::with_cluster, "with_cluster"},
    {BindingName::with_scheduler, "with_scheduler"},
    {BindingName::with_swizzle, "with_swizzle"},
    {BindingName::with_iterator, "with_iterator"},
    {BindingName::with_split_k, "with_split_k"},
    {BindingName::with_operand_swap, "with_operand_swap"},
};

const std::pair<EpilogueName, const char*> kEpilogueNames[] = {
    {EpilogueName::relu, "relu"},
    {EpilogueName::gelu, "gelu"},
    {EpilogueName::silu, "silu"},
    {EpilogueName::sigmoid, "sigmoid"},
    {EpilogueName::tanh, "tanh"},
    {EpilogueName::mish, "mish"},
    {EpilogueName::hardswish, "hardswish"},
    {EpilogueName::leaky_relu, "leaky_relu"},
    {EpilogueName::elu, "elu"},
    {EpilogueName::clip, "clip"},
    {EpilogueName::clamp, "clamp"},
    {EpilogueName::bias, "bias"},
    {EpilogueName::per_channel_scale, "per_channel_scale"},
    {EpilogueName::per_row_scale, "per_row_scale"},
    {EpilogueName::per_col_scale, "per_col_scale"},
    {EpilogueName::scale, "scale"},
    {EpilogueName::aux_store, "aux_store"},
    {EpilogueName::aux_load, "aux_load"},
    {EpilogueName::custom, "custom"},
};

template <typename Enum, std::size_t N>
const char* LookupName(const std::pair<Enum, const char*> (&table)[N], Enum value) {
    for (const auto& [k, v] : table) {
        if (k == value) return v;
    }
    return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> LookupEnum(const std::pair<Enum, const char*> (&table)[N],
                               const std::string& text) {
    for (const auto& [k, v] : table) {
        if (text == v) return k;
    }
    return std::nullopt;
}

std::string EscapeCustomExpr(const std::string& expr) {
    std::string out;
    for (char c : expr) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

void PrintArgs(std::ostringstream& out, const std::vector<Arg>& args) {
    out << "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out << ", ";
        if (args[i].key) out << *args[i].key << "=";
        out << args[i].value.to_text();
    }
    out << ")";
}

void PrintEpilogueOp(std::ostringstream& out, const EpilogueOp& op) {
    out << to_string(op.name);
    if (op.name == EpilogueName::custom) {
        out << "('" << EscapeCustomExpr(op.custom_expr.value_or("")) << "'";
        if (!op.custom_inputs.empty()) {
            out << ", inputs={";
            for (std::size_t i = 0; i < op.custom_inputs.size(); ++i) {
                if (i) out << ", ";
                out << op.custom_inputs[i].first << "=" << op.custom_inputs[i].second;
            }
            out << "}";
        }
        out << ")";
    } else {
        PrintArgs(out, op.args);
    }
}

void PrintKernelExpr(std::ostringstream& out, const KernelExpr& expr,
                     const std::string& indent) {
    out << to_string(expr.op) << "()";
    for (const Binding& binding : expr.bindings) {
        out << "\n" << indent << "." << to_string(binding.name);
        PrintArgs(out, binding.args);
    }
    for (const EpilogueOp& op : expr.epilogue) {
        out << "\n" << indent << ">> ";
        PrintEpilogueOp(out, op);
    }
}

void PrintTransposeStage(std::ostringstream& out, const TransposeStage& stage) {
    out << "transpose";
    PrintArgs(out, stage.args);
}

}  // namespace

const char* to_string(OpName name) { return LookupName(kOpNames, name); }
const char* to_string(BindingName name) { return LookupName(kBindingNames, name); }
const char* to_string(EpilogueName name) { return LookupName(kEpilogueNames, name); }

std::optional<OpName> op_name_from_string(const std::string& text) {
    return LookupEnum(kOpNames, text);
}
std::optional<BindingName> binding_name_from_string(const std::string& text) {
    return LookupEnum(kBindingNames, text);
}
std::optional<EpilogueName> epilogue_name_from_string(const std::string& text) {
    return LookupEnum(kEpilogueNames, text);
}

std::vector<OpName> all_op_names() {
    std::vector<OpName> out;
    for (const auto& [k, v] : kOpNames) out.push_back(k);
    return out;
}
std::vector<BindingName> all_binding_names() {
    std::vector<BindingName> out;
    for (const auto& [k, v] : kBindingNames) out.push_back(k);
    return out;
}
std::vector<EpilogueName> all_epilogue_names() {
    std::vector<EpilogueName> out;
    for (const auto& [k, v] : kEpilogueNames) out.push_back(k);
    return out;
}

std::string Value::to_text() const {
    if (is_ident()) return ident();
    if (is_int()) return std::to_string(integer());
    return boolean() ? "true" : "false";
}

std::string print(const DslProgram& program) {
    std::ostringstream out;
    if (program.is_pipeline()) {
        const auto& pipe = std::get<PipelineExpr>(program.root);
        out << "pipeline(";
        bool first = true;
        auto sep = [&] {
            if (!first) out << ",";
            out << "\n    ";
            first = false;
        };
        for (const TransposeStage& stage : pipe.pre) {
            sep();
            PrintTransposeStage(out, stage);
        }
        sep();
        PrintKernelExpr(out, pipe.kernel, "        ");
        for (const TransposeStage& stage : pipe.post) {
            sep();
            PrintTransposeStage(out, stage);
        }
        out << "\n)";
    } else {
        PrintKernelExpr(out, std::get<KernelExpr>(program.root), "    ");
    }
    out << "\n";
    return out.str();
}

}  // namespace ucutlass
