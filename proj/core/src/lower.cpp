#include "ucutlass/lower.hpp"

#include <functional>
#include <set>
#include <string>

namespace ucutlass {

namespace {

[[noreturn]] void Fail(const std::string& message) { throw LowerError(message); }

std::string BindingLabel(const Binding& binding) {
    return std::string(".") + to_string(binding.name);
}

// Looks up a named arg; returns nullptr when absent.
const Arg* FindArg(const Binding& binding, const std::string& key) {
    for (const Arg& arg : binding.args) {
        if (arg.key == key) return &arg;
    }
    return nullptr;
}

void RequireKeysIn(const Binding& binding, const std::set<std::string>& allowed) {
    for (const Arg& arg : binding.args) {
        if (!arg.key) {
            Fail(BindingLabel(binding) + " takes named arguments only");
        }
        if (!allowed.count(*arg.key)) {
            Fail(BindingLabel(binding) + ": unknown argument key '" + *arg.key + "'");
        }
    }
}

const Arg& SinglePositional(const Binding& binding, const char* what) {
    if (binding.args.size() != 1 || binding.args[0].key) {
        Fail(BindingLabel(binding) + " takes a single " + what);
    }
    return binding.args[0];
}

std::int64_t IntValue(const Binding& binding, const Arg& arg) {
    if (!arg.value.is_int()) {
        Fail(BindingLabel(binding) + ": expected integer, got '" + arg.value.to_text() + "'");
    }
    return arg.value.integer();
}

std::int64_t PositiveInt(const Binding& binding, const Arg& arg, const char* what) {
    std::int64_t v = IntValue(binding, arg);
    if (v < 1) {
        Fail(BindingLabel(binding) + ": " + what + " must be >= 1, got " +
             std::to_string(v));
    }
    return v;
}

DType DTypeValue(const Binding& binding, const Arg& arg) {
    if (!arg.value.is_ident()) {
        Fail(BindingLabel(binding) + ": expected dtype, got '" + arg.value.to_text() + "'");
    }
    auto dtype = dtype_from_string(arg.value.ident());
    if (!dtype) {
        Fail(BindingLabel(binding) + ": unknown dtype '" + arg.value.ident() + "'");
    }
    return *dtype;
}

Shape3 ShapeArgs(const Binding& binding) {
    RequireKeysIn(binding, {"m", "n", "k"});
    Shape3 shape;
    for (const char* key : {"m", "n", "k"}) {
        const Arg* arg = FindArg(binding, key);
        if (!arg) {
            Fail(BindingLabel(binding) + " requires m, n, and k");
        }
        std::int64_t v = PositiveInt(binding, *arg, key);
        if (key[0] == 'm') shape.m = v;
        if (key[0] == 'n') shape.n = v;
        if (key[0] == 'k') shape.k = v;
    }
    return shape;
}

void LowerDtype(const Binding& binding, KernelConfig& config) {
    RequireKeysIn(binding, {"input", "acc", "output"});
    if (const Arg* a = FindArg(binding, "input")) config.dtypes.input = DTypeValue(binding, *a);
    if (const Arg* a = FindArg(binding, "acc")) config.dtypes.acc = DTypeValue(binding, *a);
    if (const Arg* a = FindArg(binding, "output")) config.dtypes.output = DTypeValue(binding, *a);
}

void LowerLayout(const Binding& binding, KernelConfig& config) {
    if (!is_gemm_family(config.op_kind)) {
        Fail(BindingLabel(binding) +
             " applies only to GEMM operators; conv layouts are fixed (NHWC/NDHWC)");
    }
    RequireKeysIn(binding, {"A", "B", "C"});
    auto layout_value = [&](const Arg& arg) {
        if (!arg.value.is_ident()) {
            Fail(BindingLabel(binding) + ": expected layout, got '" + arg.value.to_text() + "'");
        }
        auto layout = layout_from_string(arg.value.ident());
        if (!layout || (*layout != Layout::RowMajor && *layout != Layout::ColMajor)) {
            Fail(BindingLabel(binding) + ": layout must be RowMajor or ColMajor, got '" +
                 arg.value.ident() + "'");
        }
        return *layout;
    };
    if (const Arg* a = FindArg(binding, "A")) config.layouts.a = layout_value(*a);
    if (const Arg* a = FindArg(binding, "B")) config.layouts.b = layout_value(*a);
    if (const Arg* a = FindArg(binding, "C")) config.layouts.c = layout_value(*a);
}

void LowerArch(const Binding& binding, KernelConfig& config) {
    const Arg& arg = SinglePositional(binding, "architecture identifier");
    if (!arg.value.is_ident()) {
        Fail(BindingLabel(binding) + ": expected architecture, got '" + arg.value.to_text() + "'");
    }
    auto arch = arch_from_string(arg.value.ident());
    if (!arch) {
        Fail(BindingLabel(binding) + ": unknown architecture '" + arg.value.ident() + "'");
    }
    config.arch = *arch;
}

void LowerAlignment(const Binding& binding, KernelConfig& config) {
    RequireKeysIn(binding, {"A", "B", "C"});
    auto align_value = [&](const Arg& arg) {
        std::int64_t v = IntValue(binding, arg);
        if (v < 0) {
            Fail(BindingLabel(binding) + ": alignment must be non-negative, got " +
                 std::to_string(v));
        }
        return v;
    };
    if (const Arg* a = FindArg(binding, "A")) config.alignment.a = align_value(*a);
    if (const Arg* a = FindArg(binding, "B")) config.alignment.b = align_value(*a);
    if (const Arg* a = FindArg(binding, "C")) config.alignment.c = align_value(*a);
}

void LowerScheduler(const Binding& binding, KernelConfig& config) {
    RequireKeysIn(binding, {"kernel", "epilogue"});
    SchedulerCfg scheduler;
    if (const Arg* a = FindArg(binding, "kernel")) {
        if (!a->value.is_ident()) {
            Fail(BindingLabel(binding) + ": expected schedule, got '" + a->value.to_text() + "'");
        }
        auto sched = kernel_schedule_from_string(a->value.ident());
        if (!sched) {
            Fail(BindingLabel(binding) + ": unknown kernel schedule '" + a->value.ident() + "'");
        }
        scheduler.kernel = *sched;
    }
    if (const Arg* a = FindArg(binding, "epilogue")) {
        if (!a->value.is_ident()) {
            Fail(BindingLabel(binding) + ": expected schedule, got '" + a->value.to_text() + "'");
        }
        auto sched = epilogue_schedule_from_string(a->value.ident());
        if (!sched) {
            Fail(BindingLabel(binding) + ": unknown epilogue schedule '" + a->value.ident() + "'");
        }
        scheduler.epilogue = *sched;
    }
    config.scheduler = scheduler;
}

void LowerIterator(const Binding& binding, KernelConfig& config) {
    if (!is_conv_family(config.op_kind)) {
        Fail("with_iterator applies only to conv operators");
    }
    const Arg& arg = SinglePositional(binding, "iterator kind");
    if (!arg.value.is_ident()) {
        Fail(BindingLabel(binding) + ": expected iterator kind, got '" + arg.value.to_text() + "'");
    }
    auto kind = iterator_from_string(arg.value.ident());
    if (!kind) {
        Fail(BindingLabel(binding) + ": unknown iterator kind '" + arg.value.ident() + "'");
    }
    config.iterator = *kind;
}

void LowerSplitK(const Binding& binding, KernelConfig& config) {
    if (!is_conv_family(config.op_kind)) {
        Fail("with_split_k applies only to conv operators");
    }
    const Arg* arg = nullptr;
    if (binding.args.size() == 1 && !binding.args[0].key) {
        arg = &binding.args[0];
    } else {
        RequireKeysIn(binding, {"slices"});
        arg = FindArg(binding, "slices");
    }
    if (!arg) {
        Fail(BindingLabel(binding) + " requires slices");
    }
    config.split_k = SplitK{PositiveInt(binding, *arg, "slices")};
}

void LowerBinding(const Binding& binding, KernelConfig& config,
                  std::set<std::string>& defaulted) {
    switch (binding.name) {
        case BindingName::with_dtype:
            LowerDtype(binding, config);
            defaulted.erase("dtypes");
            break;
        case BindingName::with_layout:
            LowerLayout(binding, config);
            defaulted.erase("layouts");
            break;
        case BindingName::with_arch:
            LowerArch(binding, config);
            defaulted.erase("arch");
            break;
        case BindingName::with_alignment:
            LowerAlignment(binding, config);
            defaulted.erase("alignment");
            break;
        case BindingName::with_stages:
            config.stages = PositiveInt(binding, SinglePositional(binding, "stage count"),
                                        "stages");
            defaulted.erase("stages");
            break;
        case BindingName::with_tile:
            config.tile = ShapeArgs(binding);
            break;
        case BindingName::with_threadblockshape:
            config.threadblock_shape = ShapeArgs(binding);
            break;
        case BindingName::with_cluster: {
            RequireKeysIn(binding, {"x", "y", "z"});
            Cluster cluster;
            for (const char* key : {"x", "y", "z"}) {
                const Arg* arg = FindArg(binding, key);
                if (!arg) {
                    Fail(BindingLabel(binding) + " requires x, y, and z");
                }
                std::int64_t v = PositiveInt(binding, *arg, key);
                if (key[0] == 'x') cluster.x = v;
                if (key[0] == 'y') cluster.y = v;
                if (key[0] == 'z') cluster.z = v;
            }
            config.cluster = cluster;
            break;
        }
        case BindingName::with_scheduler:
            LowerScheduler(binding, config);
            break;
        case BindingName::with_swizzle: {
            std::int64_t v = IntValue(binding, SinglePositional(binding, "swizzle factor"));
            if (v < 0) {
                Fail(BindingLabel(binding) + ": swizzle must be non-negative, got " +
                     std::to_string(v));
            }
            config.swizzle = v;
            break;
        }
        case BindingName::with_iterator:
            LowerIterator(binding, config);
            break;
        case BindingName::with_split_k:
            LowerSplitK(binding, config);
            break;
        case BindingName::with_operand_swap: {
            const Arg& arg = SinglePositional(binding, "boolean");
            if (!arg.value.is_bool()) {
                Fail(BindingLabel(binding) + ": expected boolean, got '" +
                     arg.value.to_text() + "'");
            }
            config.operand_swap = arg.value.boolean();
            break;
        }
    }
}

EpilogueNode LowerEpilogueOp(const EpilogueOp& op) {
    EpilogueNode node;
    node.name = op.name;
    node.custom_expr = op.custom_expr;
    node.custom_inputs = op.custom_inputs;
    for (const Arg& arg : op.args) {
        if (!arg.key) {
            Fail(std::string("epilogue ") + to_string(op.name) +
                 ": parameters must be key=value");
        }
        node.params[*arg.key] = arg.value;
    }
    return node;
}

// OpName and OpKind declare the same operators in the same order.
static_assert(static_cast<int>(OpName::gemm) == static_cast<int>(OpKind::gemm));
static_assert(static_cast<int>(OpName::grouped_conv) == static_cast<int>(OpKind::grouped_conv));
static_assert(static_cast<int>(OpName::depthwise_conv) ==
              static_cast<int>(OpKind::depthwise_conv));

KernelConfig LowerKernelExpr(const KernelExpr& expr) {
    KernelConfig config;
    config.op_kind = static_cast<OpKind>(expr.op);
    if (is_conv_family(config.op_kind)) {
        Layout layout = is_conv3d_family(config.op_kind) ? Layout::NDHWC : Layout::NHWC;
        config.layouts = Layouts{layout, layout, layout};
    }

    std::set<std::string> defaulted = {"dtypes", "layouts", "arch", "stages", "alignment"};
    for (const Binding& binding : expr.bindings) {
        LowerBinding(binding, config, defaulted);
    }
    for (const EpilogueOp& op : expr.epilogue) {
        config.epilogue.push_back(LowerEpilogueOp(op));
    }
    config.defaulted_fields.assign(defaulted.begin(), defaulted.end());
    return config;
}

TransformStage LowerTransposeStage(const TransposeStage& stage) {
    TransformStage out;
    for (const Arg& arg : stage.args) {
        if (!arg.key || *arg.key != "dtype") {
            Fail("transpose: the only supported argument is dtype=<dtype>");
        }
        if (!arg.value.is_ident()) {
            Fail("transpose: expected dtype, got '" + arg.value.to_text() + "'");
        }
        auto dtype = dtype_from_string(arg.value.ident());
        if (!dtype) {
            Fail("transpose: unknown dtype '" + arg.value.ident() + "'");
        }
        out.convert_dtype = *dtype;
    }
    return out;
}

}  // namespace

AnyConfig lower(const DslProgram& program) {
    if (program.is_pipeline()) {
        const auto& pipe = std::get<PipelineExpr>(program.root);
        PipelineConfig config;
        config.source_text = program.source_text;
        for (const TransposeStage& stage : pipe.pre) {
            config.pre_transforms.push_back(LowerTransposeStage(stage));
        }
        config.kernel = LowerKernelExpr(pipe.kernel);
        config.kernel.source_text = program.source_text;
        for (const TransposeStage& stage : pipe.post) {
            config.post_transforms.push_back(LowerTransposeStage(stage));
        }
        return config;
    }
    KernelConfig config = LowerKernelExpr(std::get<KernelExpr>(program.root));
    config.source_text = program.source_text;
    return config;
}

}  // namespace ucutlass
