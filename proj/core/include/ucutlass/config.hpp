#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ucutlass/ast.hpp"

namespace ucutlass {

enum class OpKind {
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

enum class DType { fp64, fp32, fp16, bf16, fp8, int8 };

enum class Layout { RowMajor, ColMajor, NHWC, NDHWC };

enum class Arch { sm_70, sm_75, sm_80, sm_86, sm_89, sm_90, sm_90a };

enum class KernelSchedule { tma, cooperative, pingpong, dflt };

enum class EpilogueSchedule { tma, dflt };

enum class IteratorKind { analytic, optimized };

const char* to_string(OpKind v);
const char* to_string(DType v);
const char* to_string(Layout v);
const char* to_string(Arch v);
const char* to_string(KernelSchedule v);
const char* to_string(EpilogueSchedule v);
const char* to_string(IteratorKind v);
std::optional<DType> dtype_from_string(const std::string& text);
std::optional<Layout> layout_from_string(const std::string& text);
std::optional<Arch> arch_from_string(const std::string& text);
std::optional<KernelSchedule> kernel_schedule_from_string(const std::string& text);
std::optional<EpilogueSchedule> epilogue_schedule_from_string(const std::string& text);
std::optional<IteratorKind> iterator_from_string(const std::string& text);

// Numeric level of an arch for range checks: sm_70 -> 70, ..., sm_90a -> 90.
int arch_level(Arch arch);
// True only for sm_90a (the variant gating custom epilogues).
bool is_arch_90a(Arch arch);
bool is_gemm_family(OpKind op);
bool is_conv_family(OpKind op);
// Conv ops over 3D volumes use NDHWC; all other convs use NHWC.
bool is_conv3d_family(OpKind op);

struct DTypes {
    DType input = DType::fp32;
    DType acc = DType::fp32;
    DType output = DType::fp32;
    bool operator==(const DTypes&) const = default;
};

struct Layouts {
    Layout a = Layout::RowMajor;
    Layout b = Layout::RowMajor;
    Layout c = Layout::RowMajor;
    bool operator==(const Layouts&) const = default;
};

struct Shape3 {
    std::int64_t m = 0, n = 0, k = 0;
    bool operator==(const Shape3&) const = default;
};

struct Cluster {
    std::int64_t x = 1, y = 1, z = 1;
    bool operator==(const Cluster&) const = default;
};

struct Alignment {
    std::int64_t a = 1, b = 1, c = 1;
    bool operator==(const Alignment&) const = default;
};

struct SchedulerCfg {
    KernelSchedule kernel = KernelSchedule::dflt;
    EpilogueSchedule epilogue = EpilogueSchedule::dflt;
    bool operator==(const SchedulerCfg&) const = default;
};

struct SplitK {
    std::int64_t slices = 1;
    bool operator==(const SplitK&) const = default;
};

// One epilogue element after lowering. Params are canonicalized into a sorted
// key -> value map; values keep the surface value kinds (ident/int/bool).
struct EpilogueNode {
    EpilogueName name;
    std::map<std::string, Value> params;
    std::optional<std::string> custom_expr;
    std::vector<std::pair<std::string, std::string>> custom_inputs;
    bool operator==(const EpilogueNode&) const = default;
};

struct KernelConfig {
    OpKind op_kind = OpKind::gemm;
    DTypes dtypes;                            // default fp32/fp32/fp32
    Layouts layouts;                          // default RowMajor (GEMM) or NHWC/NDHWC (conv)
    Arch arch = Arch::sm_90a;                 // default sm_90a
    Alignment alignment;                      // default 1/1/1
    std::int64_t stages = 2;                  // default 2
    std::optional<Shape3> tile;               // pre-SM90 tiling
    std::optional<Shape3> threadblock_shape;  // SM90+ tiling
    std::optional<Cluster> cluster;
    std::optional<SchedulerCfg> scheduler;
    std::optional<std::int64_t> swizzle;
    std::optional<IteratorKind> iterator;
    std::optional<SplitK> split_k;
    std::optional<bool> operand_swap;
    std::vector<EpilogueNode> epilogue;

    // Presentation metadata, excluded from canonical serialization:
    std::string source_text;                    // original DSL text
    std::vector<std::string> defaulted_fields;  // fields filled by defaulting

    bool operator==(const KernelConfig& other) const {
        return op_kind == other.op_kind && dtypes == other.dtypes &&
               layouts == other.layouts && arch == other.arch &&
               alignment == other.alignment && stages == other.stages &&
               tile == other.tile && threadblock_shape == other.threadblock_shape &&
               cluster == other.cluster && scheduler == other.scheduler &&
               swizzle == other.swizzle && iterator == other.iterator &&
               split_k == other.split_k && operand_swap == other.operand_swap &&
               epilogue == other.epilogue;
    }
};

struct TransformStage {
    std::optional<DType> convert_dtype;  // transpose(dtype=...) conversion
    bool operator==(const TransformStage&) const = default;
};

struct PipelineConfig {
    std::vector<TransformStage> pre_transforms;
    KernelConfig kernel;
    std::vector<TransformStage> post_transforms;
    std::string source_text;

    bool operator==(const PipelineConfig& other) const {
        return pre_transforms == other.pre_transforms && kernel == other.kernel &&
               post_transforms == other.post_transforms;
    }
};

using AnyConfig = std::variant<KernelConfig, PipelineConfig>;

inline const KernelConfig& kernel_of(const AnyConfig& config) {
    if (std::holds_alternative<KernelConfig>(config)) {
        return std::get<KernelConfig>(config);
    }
    return std::get<PipelineConfig>(config).kernel;
}

inline const std::string& source_text_of(const AnyConfig& config) {
    if (std::holds_alternative<KernelConfig>(config)) {
        return std::get<KernelConfig>(config).source_text;
    }
    return std::get<PipelineConfig>(config).source_text;
}

}  // namespace ucutlass
