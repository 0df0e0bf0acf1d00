#include "ucutlass/emit.hpp"

#include <algorithm>
#include <sstream>

#include "ucutlass/validate.hpp"

namespace ucutlass {

const char* to_string(Backend backend) {
    switch (backend) {
        case Backend::collective_builder: return "collective_builder";
        case Backend::legacy_template: return "legacy_template";
        case Backend::cute_depthwise: return "cute_depthwise";
    }
    return "?";
}

Backend select_backend(const KernelConfig& config) {
    if (arch_level(config.arch) >= 90) {
        if (is_gemm_family(config.op_kind)) return Backend::collective_builder;
        if (config.op_kind == OpKind::depthwise_conv) return Backend::cute_depthwise;
    }
    return Backend::legacy_template;
}

namespace {

// ---- Emission tables: all CUTLASS type spelling lives here -----------------

const char* CppDType(DType dtype) {
    switch (dtype) {
        case DType::fp64: return "double";
        case DType::fp32: return "float";
        case DType::fp16: return "cutlass::half_t";
        case DType::bf16: return "cutlass::bfloat16_t";
        case DType::fp8: return "cutlass::float_e4m3_t";
        case DType::int8: return "int8_t";
    }
    return "float";
}

const char* TorchScalarType(DType dtype) {
    switch (dtype) {
        case DType::fp64: return "at::kDouble";
        case DType::fp32: return "at::kFloat";
        case DType::fp16: return "at::kHalf";
        case DType::bf16: return "at::kBFloat16";
        case DType::fp8: return "at::kFloat8_e4m3fn";
        case DType::int8: return "at::kChar";
    }
    return "at::kFloat";
}

const char* CppLayout(Layout layout) {
    switch (layout) {
        case Layout::RowMajor: return "cutlass::layout::RowMajor";
        case Layout::ColMajor: return "cutlass::layout::ColumnMajor";
        case Layout::NHWC: return "cutlass::layout::TensorNHWC";
        case Layout::NDHWC: return "cutlass::layout::TensorNDHWC";
    }
    return "cutlass::layout::RowMajor";
}

const char* CppArch(Arch arch) {
    switch (arch) {
        case Arch::sm_70: return "cutlass::arch::Sm70";
        case Arch::sm_75: return "cutlass::arch::Sm75";
        case Arch::sm_80: return "cutlass::arch::Sm80";
        case Arch::sm_86: return "cutlass::arch::Sm86";
        case Arch::sm_89: return "cutlass::arch::Sm89";
        case Arch::sm_90: return "cutlass::arch::Sm90";
        case Arch::sm_90a: return "cutlass::arch::Sm90";
    }
    return "cutlass::arch::Sm90";
}

const char* Sm90KernelSchedule(KernelSchedule schedule) {
    switch (schedule) {
        case KernelSchedule::tma: return "cutlass::gemm::KernelTmaWarpSpecialized";
        case KernelSchedule::cooperative:
            return "cutlass::gemm::KernelTmaWarpSpecializedCooperative";
        case KernelSchedule::pingpong:
            return "cutlass::gemm::KernelTmaWarpSpecializedPingpong";
        case KernelSchedule::dflt: return "cutlass::gemm::collective::KernelScheduleAuto";
    }
    return "cutlass::gemm::collective::KernelScheduleAuto";
}

const char* Sm90EpilogueSchedule(EpilogueSchedule schedule) {
    switch (schedule) {
        case EpilogueSchedule::tma: return "cutlass::epilogue::TmaWarpSpecialized";
        case EpilogueSchedule::dflt:
            return "cutlass::epilogue::collective::EpilogueScheduleAuto";
    }
    return "cutlass::epilogue::collective::EpilogueScheduleAuto";
}

// Legacy kernel-builder template per conv flavor.
const char* LegacyConvKernelTemplate(OpKind op) {
    switch (op) {
        case OpKind::conv1d: return "cutlass::conv::kernel::DefaultConv2dFprop";
        case OpKind::conv2d: return "cutlass::conv::kernel::DefaultConv2dFprop";
        case OpKind::conv2d_dgrad: return "cutlass::conv::kernel::DefaultConv2dDgrad";
        case OpKind::conv2d_wgrad: return "cutlass::conv::kernel::DefaultConv2dWgrad";
        case OpKind::conv3d: return "cutlass::conv::kernel::DefaultConv3dFprop";
        case OpKind::conv3d_dgrad: return "cutlass::conv::kernel::DefaultConv3dDgrad";
        case OpKind::conv3d_wgrad: return "cutlass::conv::kernel::DefaultConv3dWgrad";
        case OpKind::depthwise_conv:
            return "cutlass::conv::kernel::DefaultDepthwiseDirect2dConvFprop";
        case OpKind::grouped_conv: return "cutlass::conv::kernel::DefaultConv2dGroupFprop";
        default: return "cutlass::conv::kernel::DefaultConv2dFprop";
    }
}

// Activation functor used by both the EVT path and the legacy chain comment.
const char* ActivationFunctor(EpilogueName name) {
    switch (name) {
        case EpilogueName::relu: return "cutlass::epilogue::thread::ReLU";
        case EpilogueName::gelu: return "cutlass::epilogue::thread::GELU";
        case EpilogueName::silu: return "cutlass::epilogue::thread::SiLU";
        case EpilogueName::sigmoid: return "cutlass::epilogue::thread::Sigmoid";
        case EpilogueName::tanh: return "cutlass::epilogue::thread::Tanh";
        case EpilogueName::mish: return "cutlass::epilogue::thread::Mish";
        case EpilogueName::hardswish: return "cutlass::epilogue::thread::HardSwish";
        case EpilogueName::leaky_relu: return "cutlass::epilogue::thread::LeakyReLU";
        case EpilogueName::elu: return "cutlass::epilogue::thread::ELU";
        case EpilogueName::clip: return "cutlass::epilogue::thread::Clamp";
        case EpilogueName::clamp: return "cutlass::epilogue::thread::Clamp";
        default: return nullptr;
    }
}

struct AuxParam {
    std::string cpp_name;
    std::string note;
};

// Epilogue ops whose data arrives at runtime get one optional tensor each in
// the extended entrypoint. Names carry the op index so repeats stay unique.
std::vector<AuxParam> AuxParams(const KernelConfig& config) {
    std::vector<AuxParam> params;
    for (std::size_t i = 0; i < config.epilogue.size(); ++i) {
        const EpilogueNode& node = config.epilogue[i];
        auto add = [&](const std::string& stem) {
            params.push_back(AuxParam{stem + "_" + std::to_string(i),
                                      std::string(to_string(node.name)) + " (epilogue op " +
                                          std::to_string(i) + ")"});
        };
        switch (node.name) {
            case EpilogueName::bias: add("bias"); break;
            case EpilogueName::scale: add("scale"); break;
            case EpilogueName::per_channel_scale: add("per_channel_scale"); break;
            case EpilogueName::per_row_scale: add("per_row_scale"); break;
            case EpilogueName::per_col_scale: add("per_col_scale"); break;
            case EpilogueName::aux_store: add("aux_store"); break;
            case EpilogueName::aux_load: add("aux_load"); break;
            case EpilogueName::custom:
                for (const auto& [key, ident] : node.custom_inputs) {
                    params.push_back(AuxParam{ident + "_" + std::to_string(i),
                                              "custom input '" + key + "' (epilogue op " +
                                                  std::to_string(i) + ")"});
                }
                break;
            default: break;  // pure activations need no aux data
        }
    }
    return params;
}

std::string ChainComment(const std::vector<EpilogueNode>& chain) {
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) out += " >> ";
        out += to_string(chain[i].name);
    }
    return out;
}

std::string ParamComment(const EpilogueNode& node) {
    std::string out;
    for (const auto& [key, value] : node.params) {
        if (!out.empty()) out += ", ";
        out += key + "=" + value.to_text();
    }
    return out;
}

// ---- Emitter ----------------------------------------------------------------

class Emitter {
  public:
    Emitter(const KernelConfig& config, const ConfigHash& hash,
            const std::string& source_text)
        : c_(config), hash_(hash), source_(source_text), backend_(select_backend(config)) {}

    EmittedArtifact Run(const PipelineConfig* pipeline = nullptr) {
        pipeline_ = pipeline;
        Prologue();
        out_ << "namespace " << hash_.name_space << " {\n\n";
        TypeAliases();
        switch (backend_) {
            case Backend::collective_builder: CollectiveBlock(); break;
            case Backend::legacy_template: LegacyBlock(); break;
            case Backend::cute_depthwise: CuteDepthwiseBlock(); break;
        }
        Entrypoints();
        out_ << "}  // namespace " << hash_.name_space << "\n\n";
        out_ << "using " << hash_.name_space << "::kernel_kernel;\n";
        out_ << "using " << hash_.name_space << "::kernel_kernel_ex;\n";

        EmittedArtifact artifact;
        artifact.filename = "ucutlass_" + hash_.hex.substr(0, 16) + ".h";
        artifact.text = out_.str();
        artifact.backend = backend_;
        artifact.entrypoints = entrypoints_;
        return artifact;
    }

  private:
    void Prologue() {
        out_ << "// " << hash_.name_space << ".h\n";
        out_ << "// Generated kernel header. Deterministic output: config hash "
             << hash_.hex.substr(0, 16) << ".\n";
        out_ << "// This text targets an external CUTLASS + PyTorch toolchain.\n";
        out_ << "#pragma once\n\n";
        out_ << "/* Original DSL:\n" << source_;
        if (!source_.empty() && source_.back() != '\n') out_ << "\n";
        out_ << "*/\n\n";
        Includes();
        out_ << "\n";
    }

    void Includes() {
        out_ << "#include <cutlass/cutlass.h>\n";
        out_ << "#include <cutlass/numeric_types.h>\n";
        switch (backend_) {
            case Backend::collective_builder:
                out_ << "#include <cutlass/gemm/collective/collective_builder.hpp>\n";
                out_ << "#include <cutlass/epilogue/collective/collective_builder.hpp>\n";
                out_ << "#include <cutlass/epilogue/fusion/"
                        "sm90_callbacks_tma_warpspecialized.hpp>\n";
                out_ << "#include <cutlass/gemm/device/gemm_universal_adapter.h>\n";
                out_ << "#include <cute/tensor.hpp>\n";
                break;
            case Backend::legacy_template:
                if (is_gemm_family(c_.op_kind)) {
                    out_ << "#include <cutlass/gemm/device/gemm_universal.h>\n";
                    if (c_.op_kind == OpKind::grouped_gemm) {
                        out_ << "#include <cutlass/gemm/device/gemm_grouped.h>\n";
                        out_ << "#include <cutlass/gemm/kernel/default_gemm_grouped.h>\n";
                    }
                } else {
                    out_ << "#include <cutlass/conv/device/implicit_gemm_convolution.h>\n";
                    out_ << "#include <cutlass/conv/kernel/default_conv2d_fprop.h>\n";
                }
                out_ << "#include <cutlass/epilogue/thread/linear_combination.h>\n";
                break;
            case Backend::cute_depthwise:
                out_ << "#include <cutlass/conv/device/conv_universal_adapter.hpp>\n";
                out_ << "#include <cute/tensor.hpp>\n";
                break;
        }
        out_ << "#include <ATen/ATen.h>\n";
        out_ << "#include <ATen/cuda/CUDAContext.h>\n";
        out_ << "#include <c10/util/Optional.h>\n";
    }

    void TypeAliases() {
        if (!c_.defaulted_fields.empty()) {
            out_ << "// Defaults applied for unbound fields: ";
            for (std::size_t i = 0; i < c_.defaulted_fields.size(); ++i) {
                if (i) out_ << ", ";
                out_ << c_.defaulted_fields[i];
            }
            out_ << "\n";
        }
        out_ << "using ElementA = " << CppDType(c_.dtypes.input) << ";\n";
        out_ << "using ElementB = " << CppDType(c_.dtypes.input) << ";\n";
        out_ << "using ElementC = " << CppDType(c_.dtypes.output) << ";\n";
        out_ << "using ElementAccumulator = " << CppDType(c_.dtypes.acc) << ";\n";
        out_ << "using ElementCompute = " << CppDType(c_.dtypes.acc) << ";\n";
        out_ << "using LayoutA = " << CppLayout(c_.layouts.a) << ";\n";
        out_ << "using LayoutB = " << CppLayout(c_.layouts.b) << ";\n";
        out_ << "using LayoutC = " << CppLayout(c_.layouts.c) << ";\n";
        out_ << "using ArchTag = " << CppArch(c_.arch) << ";\n";
        out_ << "using OperatorClass = cutlass::arch::OpClassTensorOp;\n";
        out_ << "static constexpr int kAlignmentA = " << c_.alignment.a << ";\n";
        out_ << "static constexpr int kAlignmentB = " << c_.alignment.b << ";\n";
        out_ << "static constexpr int kAlignmentC = " << c_.alignment.c << ";\n";
        out_ << "static constexpr int kStages = " << c_.stages << ";\n\n";
    }

    // --- SM90+ collective-builder path --------------------------------------

    void CollectiveBlock() {
        Shape3 tbs = c_.threadblock_shape.value_or(Shape3{128, 128, 64});
        out_ << "using TileShape = cute::Shape<cute::Int<" << tbs.m << ">, cute::Int<"
             << tbs.n << ">, cute::Int<" << tbs.k << ">>;";
        out_ << (c_.threadblock_shape ? "\n" : "  // threadblock_shape defaulted\n");
        Cluster cluster = c_.cluster.value_or(Cluster{1, 1, 1});
        out_ << "using ClusterShape = cute::Shape<cute::Int<" << cluster.x
             << ">, cute::Int<" << cluster.y << ">, cute::Int<" << cluster.z << ">>;";
        out_ << (c_.cluster ? "\n" : "  // cluster defaulted\n");
        SchedulerCfg scheduler = c_.scheduler.value_or(SchedulerCfg{});
        out_ << "using KernelScheduleType = " << Sm90KernelSchedule(scheduler.kernel)
             << ";\n";
        out_ << "using EpilogueScheduleType = " << Sm90EpilogueSchedule(scheduler.epilogue)
             << ";\n\n";

        EvtSection();

        out_ << "using CollectiveEpilogue = typename "
                "cutlass::epilogue::collective::CollectiveBuilder<\n"
             << "    ArchTag, OperatorClass,\n"
             << "    TileShape, ClusterShape,\n"
             << "    cutlass::epilogue::collective::EpilogueTileAuto,\n"
             << "    ElementAccumulator, ElementCompute,\n"
             << "    ElementC, LayoutC, kAlignmentC,\n"
             << "    ElementC, LayoutC, kAlignmentC,\n"
             << "    EpilogueScheduleType,\n"
             << "    EpilogueFusion>::CollectiveOp;\n\n";

        out_ << "using CollectiveMainloop = typename "
                "cutlass::gemm::collective::CollectiveBuilder<\n"
             << "    ArchTag, OperatorClass,\n"
             << "    ElementA, LayoutA, kAlignmentA,\n"
             << "    ElementB, LayoutB, kAlignmentB,\n"
             << "    ElementAccumulator,\n"
             << "    TileShape, ClusterShape,\n"
             << "    cutlass::gemm::collective::StageCount<kStages>,\n"
             << "    KernelScheduleType>::CollectiveOp;\n\n";

        if (c_.op_kind == OpKind::grouped_gemm) {
            out_ << "using ProblemShape = cutlass::gemm::GroupProblemShape<cute::Shape<int, "
                    "int, int>>;  // grouped GEMM\n";
        } else {
            out_ << "using ProblemShape = cute::Shape<int, int, int, int>;\n";
        }
        out_ << "using GemmKernel = cutlass::gemm::kernel::GemmUniversal<\n"
             << "    ProblemShape, CollectiveMainloop, CollectiveEpilogue>;\n";
        out_ << "using DeviceKernel = "
                "cutlass::gemm::device::GemmUniversalAdapter<GemmKernel>;\n\n";
    }

    // One visitor-tree instantiation for the whole chain: per-op node aliases
    // first (in chain order), then a single nested Sm90EVT statement.
    void EvtSection() {
        if (c_.epilogue.empty()) {
            out_ << "// No epilogue chain: plain linear combination.\n";
            out_ << "using EpilogueFusion = cutlass::epilogue::fusion::LinearCombination<\n"
                 << "    ElementC, ElementCompute>;\n\n";
            return;
        }
        out_ << "// Epilogue chain (applied in order): " << ChainComment(c_.epilogue)
             << "\n";
        std::vector<std::string> node_names;
        for (std::size_t i = 0; i < c_.epilogue.size(); ++i) {
            const EpilogueNode& node = c_.epilogue[i];
            std::string alias =
                "EvtOp" + std::to_string(i) + "_" + to_string(node.name);
            node_names.push_back(alias);
            out_ << "using " << alias << " = " << EvtNodeType(node) << ";";
            std::string params = ParamComment(node);
            out_ << "  // " << to_string(node.name);
            if (!params.empty()) out_ << "(" << params << ")";
            out_ << "\n";
        }
        out_ << "using EpilogueFusion =\n    ";
        std::string closing;
        for (std::size_t i = c_.epilogue.size(); i-- > 0;) {
            out_ << "cutlass::epilogue::fusion::Sm90EVT<" << node_names[i] << ",\n        ";
            closing += ">";
        }
        out_ << "cutlass::epilogue::fusion::Sm90AccFetch" << closing << ";\n\n";
    }

    std::string EvtNodeType(const EpilogueNode& node) {
        switch (node.name) {
            case EpilogueName::bias:
            case EpilogueName::per_channel_scale:
            case EpilogueName::per_col_scale:
                return "cutlass::epilogue::fusion::Sm90ColBroadcast<0, TileShape, "
                       "ElementCompute>";
            case EpilogueName::per_row_scale:
                return "cutlass::epilogue::fusion::Sm90RowBroadcast<0, TileShape, "
                       "ElementCompute>";
            case EpilogueName::scale:
                return "cutlass::epilogue::fusion::Sm90ScalarBroadcast<ElementCompute>";
            case EpilogueName::aux_store:
                return "cutlass::epilogue::fusion::Sm90AuxStore<0, TileShape, "
                       "ElementCompute, LayoutC>";
            case EpilogueName::aux_load:
                return "cutlass::epilogue::fusion::Sm90AuxLoad<0, TileShape, "
                       "ElementCompute, LayoutC>";
            case EpilogueName::custom:
                return "cutlass::epilogue::fusion::Sm90Compute<CustomExpr" +
                       CustomFunctor(node) +
                       ", ElementCompute, ElementCompute, "
                       "cutlass::FloatRoundStyle::round_to_nearest>";
            default:
                return std::string("cutlass::epilogue::fusion::Sm90Compute<") +
                       ActivationFunctor(node.name) +
                       ", ElementCompute, ElementCompute, "
                       "cutlass::FloatRoundStyle::round_to_nearest>";
        }
    }

    // Emits (once) a functor carrying the user expression verbatim and returns
    // the suffix distinguishing multiple custom ops.
    std::string CustomFunctor(const EpilogueNode& node) {
        std::string suffix = std::to_string(custom_counter_++);
        out_ << "struct CustomExpr" << suffix << " {\n"
             << "    // custom('" << node.custom_expr.value_or("") << "')\n"
             << "    template <class T>\n"
             << "    CUTLASS_HOST_DEVICE T operator()(T acc";
        for (const auto& [key, ident] : node.custom_inputs) {
            out_ << ", T " << key << " /* " << ident << " */";
        }
        out_ << ") const {\n"
             << "        return " << node.custom_expr.value_or("acc") << ";\n"
             << "    }\n"
             << "};\n";
        return suffix;
    }

    // --- SM70-89 legacy template path ----------------------------------------

    void LegacyBlock() {
        Shape3 tile = c_.tile.value_or(Shape3{128, 128, 32});
        out_ << "using ThreadblockShape = cutlass::gemm::GemmShape<" << tile.m << ", "
             << tile.n << ", " << tile.k << ">;";
        out_ << (c_.tile ? "\n" : "  // tile defaulted\n");
        out_ << "using WarpShape = cutlass::gemm::GemmShape<" << std::max<std::int64_t>(tile.m / 2, 16)
             << ", " << std::max<std::int64_t>(tile.n / 2, 16) << ", " << tile.k << ">;\n";
        out_ << "using InstructionShape = cutlass::gemm::GemmShape<" << InstructionShapeFor()
             << ">;\n";
        out_ << "using EpilogueOutputOp = cutlass::epilogue::thread::LinearCombination<\n"
             << "    ElementC, kAlignmentC, ElementAccumulator, ElementCompute>;\n";
        if (!c_.epilogue.empty()) {
            out_ << "// Epilogue chain (applied in order): " << ChainComment(c_.epilogue)
                 << "\n";
            for (const EpilogueNode& node : c_.epilogue) {
                std::string params = ParamComment(node);
                out_ << "//   " << to_string(node.name);
                if (!params.empty()) out_ << "(" << params << ")";
                if (const char* functor = ActivationFunctor(node.name)) {
                    out_ << " -> " << functor;
                }
                out_ << "\n";
            }
        }
        std::int64_t swizzle = c_.swizzle.value_or(1);
        out_ << "using ThreadblockSwizzle = "
                "cutlass::gemm::threadblock::GemmIdentityThreadblockSwizzle<"
             << swizzle << ">;";
        out_ << (c_.swizzle ? "\n\n" : "  // swizzle defaulted\n\n");

        if (is_gemm_family(c_.op_kind)) {
            if (c_.op_kind == OpKind::grouped_gemm) {
                out_ << "using GemmGroupedKernel = typename "
                        "cutlass::gemm::kernel::DefaultGemmGrouped<\n"
                     << "    ElementA, LayoutA, cutlass::ComplexTransform::kNone, "
                        "kAlignmentA,\n"
                     << "    ElementB, LayoutB, cutlass::ComplexTransform::kNone, "
                        "kAlignmentB,\n"
                     << "    ElementC, LayoutC, ElementAccumulator,\n"
                     << "    OperatorClass, ArchTag,\n"
                     << "    ThreadblockShape, WarpShape, InstructionShape,\n"
                     << "    EpilogueOutputOp, ThreadblockSwizzle, kStages>::GemmKernel;\n";
                out_ << "using DeviceKernel = "
                        "cutlass::gemm::device::GemmGrouped<GemmGroupedKernel>;\n\n";
            } else {
                out_ << "using DeviceKernel = cutlass::gemm::device::GemmUniversal<\n"
                     << "    ElementA, LayoutA, ElementB, LayoutB, ElementC, LayoutC,\n"
                     << "    ElementAccumulator, OperatorClass, ArchTag,\n"
                     << "    ThreadblockShape, WarpShape, InstructionShape,\n"
                     << "    EpilogueOutputOp, ThreadblockSwizzle, kStages,\n"
                     << "    kAlignmentA, kAlignmentB>;\n\n";
            }
            return;
        }

        if (c_.op_kind == OpKind::conv1d) {
            out_ << "// conv1d lowers to conv2d with H = 1.\n";
        }
        const char* iterator =
            c_.iterator == IteratorKind::analytic
                ? "cutlass::conv::IteratorAlgorithm::kAnalytic"
                : "cutlass::conv::IteratorAlgorithm::kOptimized";
        out_ << "using ConvKernel = typename " << LegacyConvKernelTemplate(c_.op_kind)
             << "<\n"
             << "    ElementA, LayoutA, ElementB, LayoutB, ElementC, LayoutC,\n"
             << "    ElementAccumulator, OperatorClass, ArchTag,\n"
             << "    ThreadblockShape, WarpShape, InstructionShape,\n"
             << "    EpilogueOutputOp, ThreadblockSwizzle, kStages,\n"
             << "    cutlass::arch::OpMultiplyAdd,\n"
             << "    " << iterator << ">::Kernel;";
        out_ << (c_.iterator ? "\n" : "  // iterator defaulted\n");
        out_ << "using DeviceKernel = "
                "cutlass::conv::device::ImplicitGemmConvolution<ConvKernel>;\n\n";
    }

    std::string InstructionShapeFor() const {
        switch (c_.arch) {
            case Arch::sm_70: return "8, 8, 4";
            case Arch::sm_75: return "16, 8, 8";
            default: return "16, 8, 16";
        }
    }

    // --- SM90+ CuTe depthwise path -------------------------------------------

    void CuteDepthwiseBlock() {
        out_ << "// CuTe direct-convolution path: SM90+ depthwise with limited\n"
             << "// stride/dilation and epilogue support.\n";
        Shape3 tbs = c_.threadblock_shape.value_or(Shape3{64, 64, 8});
        out_ << "using TileShape = cute::Shape<cute::Int<" << tbs.m << ">, cute::Int<"
             << tbs.n << ">, cute::Int<" << tbs.k << ">>;";
        out_ << (c_.threadblock_shape ? "\n" : "  // threadblock_shape defaulted\n");
        bool relu = !c_.epilogue.empty();
        out_ << "// Epilogue: " << (relu ? "relu" : "none (identity)") << "\n";
        out_ << "using DepthwiseKernel = cutlass::conv::kernel::CuTeDepthwiseDirectConv<\n"
             << "    ElementA, ElementB, ElementC, ElementAccumulator,\n"
             << "    cutlass::layout::TensorNHWC, TileShape, ArchTag,\n"
             << "    " << (relu ? "cutlass::epilogue::thread::ReLU<ElementCompute>"
                                : "cutlass::epilogue::thread::Identity<ElementCompute>")
             << ">;\n";
        out_ << "using DeviceKernel = "
                "cutlass::conv::device::ConvUniversalAdapter<DepthwiseKernel>;\n\n";
    }

    // --- Entrypoints ----------------------------------------------------------

    void Entrypoints() {
        aux_params_ = AuxParams(c_);
        out_ << "// --- PyTorch wrapper entrypoints "
                "-------------------------------------------\n\n";
        if (pipeline_) {
            PipelineTransforms();
            KernelBody("kernel_stage");
            PipelineDriver();
        } else {
            KernelBody("kernel_kernel_ex");
            BasicEntrypoint("kernel_kernel_ex");
        }
        entrypoints_.push_back("kernel_kernel");
        entrypoints_.push_back("kernel_kernel_ex");
    }

    std::string ExSignature(const std::string& name) const {
        std::string sig = "inline at::Tensor " + name +
                          "(const at::Tensor& A, const at::Tensor& B,\n"
                          "        c10::optional<at::Tensor> C, double alpha, double beta";
        for (const AuxParam& param : aux_params_) {
            sig += ",\n        c10::optional<at::Tensor> " + param.cpp_name + " /* " +
                   param.note + " */";
        }
        sig += ")";
        return sig;
    }

    // kernel_kernel(A, B, /*C*/, alpha, beta) delegating to the extended form.
    void BasicEntrypoint(const std::string& target) {
        out_ << "inline at::Tensor kernel_kernel(const at::Tensor& A, const at::Tensor& "
                "B,\n"
             << "        c10::optional<at::Tensor> C, double alpha, double beta) {\n"
             << "    return " << target << "(A, B, C, alpha, beta";
        for (std::size_t i = 0; i < aux_params_.size(); ++i) out_ << ", c10::nullopt";
        out_ << ");\n}\n\n";
    }

    void KernelBody(const std::string& name) {
        out_ << ExSignature(name) << " {\n";
        out_ << "    TORCH_CHECK(A.is_cuda(), \"A must be a CUDA tensor\");\n";
        out_ << "    TORCH_CHECK(B.is_cuda(), \"B must be a CUDA tensor\");\n";
        if (is_gemm_family(c_.op_kind)) {
            out_ << "    int64_t M = A.size(0);\n"
                 << "    int64_t K = A.size(1);\n"
                 << "    int64_t N = B.size(1);\n";
            if (c_.operand_swap.value_or(false)) {
                out_ << "    TORCH_CHECK(M == N, \"operand_swap requires a square problem "
                        "(M == N)\");\n";
            }
            out_ << "    auto D = at::empty({M, N}, A.options().dtype("
                 << TorchScalarType(c_.dtypes.output) << "));\n";
        } else {
            out_ << "    // Activation A is NHWC/NDHWC; filter B carries K and the "
                    "receptive field.\n";
            out_ << "    int64_t N = A.size(0);\n"
                 << "    int64_t K = B.size(0);\n";
            out_ << "    auto out_sizes = A.sizes().vec();\n"
                 << "    out_sizes.back() = K;\n";
            out_ << "    auto D = at::empty(out_sizes, A.options().dtype("
                 << TorchScalarType(c_.dtypes.output) << "));\n";
        }
        out_ << "\n    // Stride packing\n";
        if (backend_ == Backend::collective_builder) {
            out_ << "    using StrideA = typename GemmKernel::StrideA;\n"
                 << "    using StrideB = typename GemmKernel::StrideB;\n"
                 << "    using StrideC = typename GemmKernel::StrideC;\n"
                 << "    using StrideD = typename GemmKernel::StrideD;\n"
                 << "    auto stride_A = cutlass::make_cute_packed_stride(StrideA{}, {int(M), "
                    "int(K), 1});\n"
                 << "    auto stride_B = cutlass::make_cute_packed_stride(StrideB{}, {int(N), "
                    "int(K), 1});\n"
                 << "    auto stride_C = cutlass::make_cute_packed_stride(StrideC{}, {int(M), "
                    "int(N), 1});\n"
                 << "    auto stride_D = stride_C;\n";
        } else if (is_gemm_family(c_.op_kind)) {
            out_ << "    int64_t lda = A.stride(0);\n"
                 << "    int64_t ldb = B.stride(0);\n"
                 << "    int64_t ldd = D.stride(0);\n";
        } else {
            out_ << "    // Conv strides derive from the NHWC/NDHWC packing of A, B, D.\n";
        }

        out_ << "\n    // Argument building\n";
        ArgumentsBlock();

        out_ << "\n    // Workspace allocation\n"
             << "    size_t workspace_size = DeviceKernel::get_workspace_size(arguments);\n"
             << "    auto workspace = at::empty({static_cast<int64_t>(workspace_size)},\n"
             << "                               A.options().dtype(at::kByte));\n";
        out_ << "\n    // Launch on the caller's current stream\n"
             << "    DeviceKernel op;\n"
             << "    TORCH_CHECK(op.can_implement(arguments) == cutlass::Status::kSuccess,\n"
             << "                \"kernel cannot implement this problem\");\n"
             << "    TORCH_CHECK(op.initialize(arguments, workspace.data_ptr()) ==\n"
             << "                cutlass::Status::kSuccess, \"kernel initialization "
                "failed\");\n"
             << "    TORCH_CHECK(op.run(at::cuda::getCurrentCUDAStream()) ==\n"
             << "                cutlass::Status::kSuccess, \"kernel launch failed\");\n"
             << "    return D;\n"
             << "}\n\n";
    }

    void ArgumentsBlock() {
        if (backend_ == Backend::collective_builder) {
            out_ << "    typename DeviceKernel::Arguments arguments{\n"
                 << "        cutlass::gemm::GemmUniversalMode::kGemm,\n"
                 << "        {int(M), int(N), int(K), 1},\n"
                 << "        {reinterpret_cast<ElementA const*>(A.data_ptr()), stride_A,\n"
                 << "         reinterpret_cast<ElementB const*>(B.data_ptr()), stride_B},\n"
                 << "        {{ElementCompute(alpha), ElementCompute(beta)},\n"
                 << "         C ? reinterpret_cast<ElementC const*>(C->data_ptr()) : "
                    "nullptr, stride_C,\n"
                 << "         reinterpret_cast<ElementC*>(D.data_ptr()), stride_D}};\n";
        } else if (is_gemm_family(c_.op_kind)) {
            out_ << "    typename DeviceKernel::Arguments arguments(\n"
                 << "        cutlass::gemm::GemmUniversalMode::kGemm,\n"
                 << "        {int(M), int(N), int(K)},\n"
                 << "        /*batch_count=*/1,\n"
                 << "        {ElementCompute(alpha), ElementCompute(beta)},\n"
                 << "        A.data_ptr(), B.data_ptr(),\n"
                 << "        C ? C->data_ptr() : nullptr, D.data_ptr(),\n"
                 << "        /*batch strides*/ 0, 0, 0, 0,\n"
                 << "        lda, ldb, ldd, ldd);\n";
        } else {
            out_ << "    cutlass::conv::Conv2dProblemSize problem_size(\n"
                 << "        /*N=*/int(N), /*H=*/int(A.size(1)), /*W=*/int(A.size(2)),\n"
                 << "        /*C=*/int(A.size(-1)), /*K=*/int(K),\n"
                 << "        /*R=*/int(B.size(1)), /*S=*/int(B.size(2)),\n"
                 << "        /*pad=*/1, 1, /*stride=*/1, 1, /*dilation=*/1, 1,\n"
                 << "        cutlass::conv::Mode::kCrossCorrelation);\n";
            if (c_.split_k) {
                out_ << "    // split-K across " << c_.split_k->slices << " slices\n";
            }
            out_ << "    typename DeviceKernel::Arguments arguments(\n"
                 << "        problem_size,\n"
                 << "        {reinterpret_cast<ElementA const*>(A.data_ptr()), LayoutA()},\n"
                 << "        {reinterpret_cast<ElementB const*>(B.data_ptr()), LayoutB()},\n"
                 << "        {C ? reinterpret_cast<ElementC const*>(C->data_ptr()) : "
                    "nullptr, LayoutC()},\n"
                 << "        {reinterpret_cast<ElementC*>(D.data_ptr()), LayoutC()},\n"
                 << "        {ElementCompute(alpha), ElementCompute(beta)}";
            if (c_.split_k) {
                out_ << ",\n        cutlass::conv::SplitKMode::kParallel, "
                     << c_.split_k->slices;
            }
            out_ << ");\n";
        }
    }

    // --- Pipeline pieces ------------------------------------------------------

    void PipelineTransforms() {
        int index = 0;
        for (const TransformStage& stage : pipeline_->pre_transforms) {
            TransformFunction(index++, stage);
        }
        first_post_index_ = index;
        for (const TransformStage& stage : pipeline_->post_transforms) {
            TransformFunction(index++, stage);
        }
    }

    void TransformFunction(int index, const TransformStage& stage) {
        std::string name = "transform_stage_" + std::to_string(index);
        entrypoints_.push_back(name);
        out_ << "// Transform stage " << index << ": transpose";
        if (stage.convert_dtype) {
            out_ << " fused with conversion to " << to_string(*stage.convert_dtype);
        }
        out_ << "\ninline at::Tensor " << name << "(const at::Tensor& input) {\n"
             << "    auto out = input.transpose(-2, -1).contiguous();\n";
        if (stage.convert_dtype) {
            out_ << "    out = out.to(" << TorchScalarType(*stage.convert_dtype) << ");\n";
        }
        out_ << "    return out;\n}\n\n";
    }

    void PipelineDriver() {
        entrypoints_.push_back("kernel_stage");
        std::size_t pre = pipeline_->pre_transforms.size();
        std::size_t post = pipeline_->post_transforms.size();
        out_ << "// Driver: runs " << pre << " pre-transform stage(s), the kernel stage, "
             << "then " << post << " post-transform stage(s), in order.\n";
        out_ << ExSignature("kernel_kernel_ex") << " {\n";
        if (pre == 0 && post == 0) {
            out_ << "    // Degenerate pipeline: delegate directly to the kernel stage.\n";
            out_ << "    return kernel_stage(A, B, C, alpha, beta";
            for (const AuxParam& param : aux_params_) out_ << ", " << param.cpp_name;
            out_ << ");\n}\n\n";
        } else {
            out_ << "    at::Tensor staged = A;\n";
            for (std::size_t i = 0; i < pre; ++i) {
                out_ << "    staged = transform_stage_" << i << "(staged);\n";
            }
            out_ << "    at::Tensor result = kernel_stage(staged, B, C, alpha, beta";
            for (const AuxParam& param : aux_params_) out_ << ", " << param.cpp_name;
            out_ << ");\n";
            for (std::size_t i = 0; i < post; ++i) {
                out_ << "    result = transform_stage_" << (first_post_index_ + i)
                     << "(result);\n";
            }
            out_ << "    return result;\n}\n\n";
        }
        BasicEntrypoint("kernel_kernel_ex");
    }

    const KernelConfig& c_;
    const ConfigHash& hash_;
    const std::string& source_;
    Backend backend_;
    const PipelineConfig* pipeline_ = nullptr;
    std::ostringstream out_;
    std::vector<std::string> entrypoints_;
    std::vector<AuxParam> aux_params_;
    int custom_counter_ = 0;
    int first_post_index_ = 0;
};

void GuardValidated(const ValidationReport& report) {
    if (!report.ok) {
        std::string first;
        for (const Diagnostic& d : report.diagnostics) {
            if (d.severity == Severity::error) {
                first = d.rule_id + ": " + d.message;
                break;
            }
        }
        throw EmitError("emit called on an unvalidated config (" + first +
                        "); run validate() and fix errors first");
    }
}

}  // namespace

EmittedArtifact emit(const KernelConfig& config, const ConfigHash& hash,
                     const std::string& source_text) {
    GuardValidated(validate(config));
    return Emitter(config, hash, source_text).Run();
}

EmittedArtifact emit_pipeline(const PipelineConfig& config, const ConfigHash& hash,
                              const std::string& source_text) {
    GuardValidated(validate(config));
    return Emitter(config.kernel, hash, source_text).Run(&config);
}

EmittedArtifact emit(const AnyConfig& config) {
    ConfigHash hash = config_hash(config);
    if (std::holds_alternative<PipelineConfig>(config)) {
        const auto& pipeline = std::get<PipelineConfig>(config);
        return emit_pipeline(pipeline, hash, pipeline.source_text);
    }
    const auto& kernel = std::get<KernelConfig>(config);
    return emit(kernel, hash, kernel.source_text);
}

LintResult lint_structure(const std::string& text) {
    LintResult result;
    long braces = 0;
    long parens = 0;
    bool bad = false;

    enum class Mode { code, line_comment, block_comment, dq_string, sq_char };
    Mode mode = Mode::code;

    auto starts_with = [&](std::size_t i, const char* prefix) {
        return text.compare(i, std::string::traits_type::length(prefix), prefix) == 0;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        switch (mode) {
            case Mode::line_comment:
                if (c == '\n') mode = Mode::code;
                continue;
            case Mode::block_comment:
                if (c == '*' && i + 1 < text.size() && text[i + 1] == '/') {
                    mode = Mode::code;
                    ++i;
                }
                continue;
            case Mode::dq_string:
                if (c == '\\') { ++i; continue; }
                if (c == '"') mode = Mode::code;
                continue;
            case Mode::sq_char:
                if (c == '\\') { ++i; continue; }
                if (c == '\'') mode = Mode::code;
                continue;
            case Mode::code:
                break;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            mode = Mode::line_comment;
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            mode = Mode::block_comment;
            ++i;
            continue;
        }
        if (c == '"') { mode = Mode::dq_string; continue; }
        if (c == '\'') { mode = Mode::sq_char; continue; }
        if (c == '{') ++braces;
        if (c == '}') { --braces; if (braces < 0) bad = true; }
        if (c == '(') ++parens;
        if (c == ')') { --parens; if (parens < 0) bad = true; }
        if (c == 'n' && (i == 0 || text[i - 1] == '\n') && starts_with(i, "namespace ")) {
            // A namespace block opener is "namespace <ident> {" at line start.
            std::size_t eol = text.find('\n', i);
            std::string line = text.substr(i, eol == std::string::npos ? std::string::npos
                                                                       : eol - i);
            if (line.find('{') != std::string::npos) ++result.namespace_opens;
        }
        if (c == '}' && starts_with(i, "}  // namespace")) ++result.namespace_closes;
    }
    result.braces_balanced = !bad && braces == 0;
    result.parens_balanced = !bad && parens == 0;
    return result;
}

}  // namespace ucutlass
