#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucutlass/config.hpp"

namespace ucutlass {

enum class OpNodeKind {
    gemm,
    batched_gemm,
    grouped_gemm,
    conv1d,
    conv2d,
    conv3d,
    elementwise,
    reduction,
    softmax,
    layernorm,
    rmsnorm,
    cumulative_scan,
};

const char* to_string(OpNodeKind kind);
std::optional<OpNodeKind> op_node_kind_from_string(const std::string& text);

struct GroupDims {
    std::int64_t m = 1, n = 1, k = 1;
};

// One operator in an analysis problem. Which fields matter depends on kind:
// gemm family uses m/n/k (+ batch for batched_gemm, groups for grouped_gemm);
// conv family uses n/c/k_filters/spatial/kernel/stride/pad/groups_count;
// pointwise/reduction kinds use elems (+ flops_per_elem, axis).
struct OpNode {
    OpNodeKind kind = OpNodeKind::gemm;
    std::int64_t m = 1, n = 1, k = 1;
    std::int64_t batch = 1;
    std::vector<GroupDims> groups;
    std::int64_t conv_n = 1, conv_c = 1, conv_k = 1, conv_groups = 1;
    std::vector<std::int64_t> spatial, kernel, stride, pad;
    std::int64_t elems = 1;
    double flops_per_elem = 1.0;
    std::int64_t axis = 1;
};

enum class Fusion { perfect, none };

const char* to_string(Fusion fusion);

struct ProblemSpec {
    std::string name;
    std::vector<OpNode> ops;       // nonempty, chained in order
    Fusion fusion = Fusion::perfect;
    DType io_dtype = DType::fp32;  // dtype of externally visible tensors
};

struct HardwareSpec {
    std::string name;
    std::map<DType, double> peak_flops;  // FLOP/s at reference clock
    double peak_bw = 0.0;                // bytes/s at reference clock
    double reference_clock_mhz = 1500.0;
    double current_clock_mhz = 1500.0;   // default per reporting convention
    bool bw_clock_scaling = false;
};

// FLOP-per-element conventions for the pointwise kinds; overridable by config.
struct FlopConstants {
    double reduction = 1.0;
    double softmax = 5.0;
    double layernorm = 7.0;
    double rmsnorm = 4.0;
    double cumulative_scan = 1.0;
};

struct OpCost {
    std::size_t op_index = 0;
    double flops = 0.0;
    double bytes = 0.0;
};

struct Characterization {
    double flops = 0.0;
    double bytes = 0.0;
    std::vector<OpCost> per_op_breakdown;
};

// Counts total FLOPs and best-case DRAM bytes (each unique input element read
// once, each output written once, intermediates free under fusion=perfect).
// Throws SpecError on shape mismatch between chained ops or non-positive dims.
Characterization characterize(const ProblemSpec& spec,
                              const FlopConstants& constants = {});

struct EffectiveLimits {
    double peak_flops_eff = 0.0;
    double peak_bw_eff = 0.0;
};

// Clock-scaled hardware limits for one math dtype. Throws HwError when the
// dtype has no peak entry or the spec violates its invariants.
EffectiveLimits effective_limits(const HardwareSpec& hw, DType dtype);

enum class Bottleneck { compute_bound, memory_bound };

const char* to_string(Bottleneck bottleneck);

struct SolReport {
    // Core roofline quantities.
    double flops = 0.0;
    double bytes = 0.0;
    double arithmetic_intensity = 0.0;  // flops/byte
    double t_compute = 0.0;             // seconds
    double t_mem = 0.0;                 // seconds
    double t_sol = 0.0;                 // seconds, == max(t_compute, t_mem)
    Bottleneck bottleneck = Bottleneck::compute_bound;
    double ridge_point = 0.0;           // flops/byte
    DType assumption_dtype = DType::fp32;  // math precision assumed
    std::vector<OpCost> per_op_breakdown;

    // Presentation context carried into reports.
    std::string problem_name;
    std::string hardware_name;
    DType io_dtype = DType::fp32;
    Fusion fusion = Fusion::perfect;
    double peak_flops_eff = 0.0;
    double peak_bw_eff = 0.0;
    double reference_clock_mhz = 0.0;
    double current_clock_mhz = 0.0;
    bool bw_clock_scaling = false;
    std::vector<std::string> op_summaries;  // one line per op for section 1
};

// Full SOL analysis assuming math precision `dtype`; bytes are always costed
// at the problem's io_dtype.
SolReport sol(const ProblemSpec& spec, const HardwareSpec& hw, DType dtype,
              const FlopConstants& constants = {});

// FP16 variant: FLOPs costed at the fp16 peak, bytes unchanged at io_dtype.
SolReport sol_fp16_variant(const ProblemSpec& spec, const HardwareSpec& hw,
                           const FlopConstants& constants = {});

// Human-readable report: problem characterization, hardware limits, roofline
// bound, bottleneck classification, plus the perfect-caching caveat.
std::string render_sol_report(const SolReport& report);

// Machine-readable JSON record (round-trips through sol_report_from_json).
std::string sol_report_to_json(const SolReport& report);
SolReport sol_report_from_json(const std::string& text);

// Config-file loaders (JSON). Throw SpecError/HwError on malformed content.
ProblemSpec problem_spec_from_json(const std::string& text);
HardwareSpec hardware_spec_from_json(const std::string& text);
FlopConstants flop_constants_from_json(const std::string& text);

std::size_t dtype_size_bytes(DType dtype);

}  // namespace ucutlass
