#include "ucutlass/sol.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace ucutlass {

namespace {

const std::pair<OpNodeKind, const char*> kOpNodeKinds[] = {
    {OpNodeKind::gemm, "gemm"},
    {OpNodeKind::batched_gemm, "batched_gemm"},
    {OpNodeKind::grouped_gemm, "grouped_gemm"},
    {OpNodeKind::conv1d, "conv1d"},
    {OpNodeKind::conv2d, "conv2d"},
    {OpNodeKind::conv3d, "conv3d"},
    {OpNodeKind::elementwise, "elementwise"},
    {OpNodeKind::reduction, "reduction"},
    {OpNodeKind::softmax, "softmax"},
    {OpNodeKind::layernorm, "layernorm"},
    {OpNodeKind::rmsnorm, "rmsnorm"},
    {OpNodeKind::cumulative_scan, "cumulative_scan"},
};

bool IsConv(OpNodeKind kind) {
    return kind == OpNodeKind::conv1d || kind == OpNodeKind::conv2d ||
           kind == OpNodeKind::conv3d;
}

int ConvRank(OpNodeKind kind) {
    if (kind == OpNodeKind::conv1d) return 1;
    if (kind == OpNodeKind::conv2d) return 2;
    return 3;
}

[[noreturn]] void BadSpec(const std::string& message) { throw SpecError(message); }

void RequirePositive(std::int64_t value, const char* what, std::size_t op_index) {
    if (value < 1) {
        BadSpec("op " + std::to_string(op_index) + ": " + what + " must be >= 1, got " +
                std::to_string(value));
    }
}

// Element counts and FLOPs for one op, independent of its chain position.
struct OpElems {
    std::vector<double> inputs;  // inputs[0] is the chained operand
    double output = 0.0;
    double flops = 0.0;
    std::string summary;
};

OpElems Analyze(const OpNode& op, std::size_t index, const FlopConstants& constants) {
    OpElems result;
    std::ostringstream summary;
    switch (op.kind) {
        case OpNodeKind::gemm: {
            RequirePositive(op.m, "M", index);
            RequirePositive(op.n, "N", index);
            RequirePositive(op.k, "K", index);
            double m = double(op.m), n = double(op.n), k = double(op.k);
            result.inputs = {m * k, k * n};
            result.output = m * n;
            result.flops = 2.0 * m * n * k;
            summary << "gemm (M=" << op.m << ", N=" << op.n << ", K=" << op.k << ")";
            break;
        }
        case OpNodeKind::batched_gemm: {
            RequirePositive(op.m, "M", index);
            RequirePositive(op.n, "N", index);
            RequirePositive(op.k, "K", index);
            RequirePositive(op.batch, "batch", index);
            double m = double(op.m), n = double(op.n), k = double(op.k),
                   b = double(op.batch);
            result.inputs = {b * m * k, b * k * n};
            result.output = b * m * n;
            result.flops = b * 2.0 * m * n * k;
            summary << "batched_gemm (B=" << op.batch << ", M=" << op.m << ", N=" << op.n
                    << ", K=" << op.k << ")";
            break;
        }
        case OpNodeKind::grouped_gemm: {
            if (op.groups.empty()) {
                BadSpec("op " + std::to_string(index) + ": grouped_gemm requires groups");
            }
            double in_a = 0, in_b = 0, out = 0, flops = 0;
            for (std::size_t g = 0; g < op.groups.size(); ++g) {
                const GroupDims& dims = op.groups[g];
                RequirePositive(dims.m, "group M", index);
                RequirePositive(dims.n, "group N", index);
                RequirePositive(dims.k, "group K", index);
                in_a += double(dims.m) * double(dims.k);
                in_b += double(dims.k) * double(dims.n);
                out += double(dims.m) * double(dims.n);
                flops += 2.0 * double(dims.m) * double(dims.n) * double(dims.k);
            }
            result.inputs = {in_a, in_b};
            result.output = out;
            result.flops = flops;
            summary << "grouped_gemm (" << op.groups.size() << " groups)";
            break;
        }
        case OpNodeKind::conv1d:
        case OpNodeKind::conv2d:
        case OpNodeKind::conv3d: {
            int rank = ConvRank(op.kind);
            RequirePositive(op.conv_n, "N", index);
            RequirePositive(op.conv_c, "C", index);
            RequirePositive(op.conv_k, "K", index);
            RequirePositive(op.conv_groups, "groups", index);
            if (int(op.spatial.size()) != rank || int(op.kernel.size()) != rank) {
                BadSpec("op " + std::to_string(index) + ": conv" + std::to_string(rank) +
                        "d requires " + std::to_string(rank) +
                        " spatial and kernel extents");
            }
            auto axis_value = [&](const std::vector<std::int64_t>& values, std::size_t i,
                                  std::int64_t fallback) {
                return i < values.size() ? values[i] : fallback;
            };
            double in_spatial = 1, out_spatial = 1, kernel_volume = 1;
            for (int i = 0; i < rank; ++i) {
                std::int64_t extent = op.spatial[i];
                std::int64_t window = op.kernel[i];
                std::int64_t stride = axis_value(op.stride, i, 1);
                std::int64_t padding = axis_value(op.pad, i, 0);
                RequirePositive(extent, "spatial extent", index);
                RequirePositive(window, "kernel extent", index);
                RequirePositive(stride, "stride", index);
                if (padding < 0) BadSpec("op " + std::to_string(index) + ": pad < 0");
                std::int64_t out = (extent + 2 * padding - window) / stride + 1;
                if (out < 1) {
                    BadSpec("op " + std::to_string(index) +
                            ": kernel does not fit the padded input");
                }
                in_spatial *= double(extent);
                out_spatial *= double(out);
                kernel_volume *= double(window);
            }
            if (op.conv_c % op.conv_groups != 0) {
                BadSpec("op " + std::to_string(index) + ": C must divide by groups");
            }
            double c_per_group = double(op.conv_c) / double(op.conv_groups);
            double activation = double(op.conv_n) * in_spatial * double(op.conv_c);
            double filter = double(op.conv_k) * kernel_volume * c_per_group;
            double output = double(op.conv_n) * out_spatial * double(op.conv_k);
            result.inputs = {activation, filter};
            result.output = output;
            result.flops = 2.0 * output * c_per_group * kernel_volume;
            summary << to_string(op.kind) << " (N=" << op.conv_n << ", C=" << op.conv_c
                    << ", K=" << op.conv_k << ")";
            break;
        }
        case OpNodeKind::elementwise: {
            RequirePositive(op.elems, "elems", index);
            result.inputs = {double(op.elems)};
            result.output = double(op.elems);
            result.flops = double(op.elems) * op.flops_per_elem;
            summary << "elementwise (elems=" << op.elems
                    << ", flops/elem=" << op.flops_per_elem << ")";
            break;
        }
        case OpNodeKind::reduction: {
            RequirePositive(op.elems, "elems", index);
            RequirePositive(op.axis, "axis", index);
            result.inputs = {double(op.elems)};
            result.output = double(op.elems) / double(op.axis);
            result.flops = double(op.elems) * constants.reduction;
            summary << "reduction (elems=" << op.elems << ", axis=" << op.axis << ")";
            break;
        }
        case OpNodeKind::softmax:
        case OpNodeKind::layernorm:
        case OpNodeKind::rmsnorm:
        case OpNodeKind::cumulative_scan: {
            RequirePositive(op.elems, "elems", index);
            RequirePositive(op.axis, "axis", index);
            result.inputs = {double(op.elems)};
            result.output = double(op.elems);
            double per_elem = constants.cumulative_scan;
            if (op.kind == OpNodeKind::softmax) per_elem = constants.softmax;
            if (op.kind == OpNodeKind::layernorm) per_elem = constants.layernorm;
            if (op.kind == OpNodeKind::rmsnorm) per_elem = constants.rmsnorm;
            result.flops = double(op.elems) * per_elem;
            summary << to_string(op.kind) << " (elems=" << op.elems << ", axis=" << op.axis
                    << ")";
            break;
        }
    }
    result.summary = summary.str();
    return result;
}

}  // namespace

const char* to_string(OpNodeKind kind) {
    for (const auto& [k, v] : kOpNodeKinds) {
        if (k == kind) return v;
    }
    return "?";
}

std::optional<OpNodeKind> op_node_kind_from_string(const std::string& text) {
    for (const auto& [k, v] : kOpNodeKinds) {
        if (text == v) return k;
    }
    return std::nullopt;
}

const char* to_string(Fusion fusion) {
    return fusion == Fusion::perfect ? "perfect" : "none";
}

const char* to_string(Bottleneck bottleneck) {
    return bottleneck == Bottleneck::compute_bound ? "compute_bound" : "memory_bound";
}

std::size_t dtype_size_bytes(DType dtype) {
    switch (dtype) {
        case DType::fp64: return 8;
        case DType::fp32: return 4;
        case DType::fp16: return 2;
        case DType::bf16: return 2;
        case DType::fp8: return 1;
        case DType::int8: return 1;
    }
    return 4;
}

Characterization characterize(const ProblemSpec& spec, const FlopConstants& constants) {
    if (spec.ops.empty()) BadSpec("problem '" + spec.name + "' has no ops");
    double io_size = double(dtype_size_bytes(spec.io_dtype));

    std::vector<OpElems> elems;
    elems.reserve(spec.ops.size());
    for (std::size_t i = 0; i < spec.ops.size(); ++i) {
        elems.push_back(Analyze(spec.ops[i], i, constants));
    }
    // Chained ops must agree on the handed-over tensor's element count.
    for (std::size_t i = 1; i < elems.size(); ++i) {
        if (elems[i].inputs.at(0) != elems[i - 1].output) {
            std::ostringstream message;
            message << "op " << i << " consumes " << elems[i].inputs.at(0)
                    << " elements but op " << (i - 1) << " produces "
                    << elems[i - 1].output;
            BadSpec(message.str());
        }
    }

    Characterization result;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        OpCost cost;
        cost.op_index = i;
        cost.flops = elems[i].flops;
        double external_bytes = 0.0;
        if (spec.fusion == Fusion::perfect) {
            // The chained operand is produced on-chip; only genuinely external
            // inputs touch DRAM. The final output is written once, by the last op.
            std::size_t first_external = (i == 0) ? 0 : 1;
            for (std::size_t j = first_external; j < elems[i].inputs.size(); ++j) {
                external_bytes += elems[i].inputs[j];
            }
            if (i + 1 == elems.size()) external_bytes += elems[i].output;
        } else {
            for (double in : elems[i].inputs) external_bytes += in;
            external_bytes += elems[i].output;
        }
        cost.bytes = external_bytes * io_size;
        result.flops += cost.flops;
        result.bytes += cost.bytes;
        result.per_op_breakdown.push_back(cost);
    }
    return result;
}

EffectiveLimits effective_limits(const HardwareSpec& hw, DType dtype) {
    if (hw.peak_bw <= 0) throw HwError("hardware '" + hw.name + "': peak_bw must be > 0");
    if (hw.reference_clock_mhz <= 0 || hw.current_clock_mhz <= 0) {
        throw HwError("hardware '" + hw.name + "': clocks must be > 0");
    }
    auto it = hw.peak_flops.find(dtype);
    if (it == hw.peak_flops.end()) {
        throw HwError("hardware '" + hw.name + "' has no " +
                      std::string(to_string(dtype)) + " peak_flops entry");
    }
    if (it->second <= 0) {
        throw HwError("hardware '" + hw.name + "': peak_flops must be > 0");
    }
    double ratio = hw.current_clock_mhz / hw.reference_clock_mhz;
    EffectiveLimits limits;
    limits.peak_flops_eff = it->second * ratio;
    limits.peak_bw_eff = hw.peak_bw * (hw.bw_clock_scaling ? ratio : 1.0);
    return limits;
}

SolReport sol(const ProblemSpec& spec, const HardwareSpec& hw, DType dtype,
              const FlopConstants& constants) {
    Characterization ch = characterize(spec, constants);
    EffectiveLimits limits = effective_limits(hw, dtype);

    SolReport report;
    report.flops = ch.flops;
    report.bytes = ch.bytes;
    report.per_op_breakdown = ch.per_op_breakdown;
    report.arithmetic_intensity = ch.flops / ch.bytes;
    report.t_compute = ch.flops / limits.peak_flops_eff;
    report.t_mem = ch.bytes / limits.peak_bw_eff;
    report.t_sol = std::max(report.t_compute, report.t_mem);
    report.ridge_point = limits.peak_flops_eff / limits.peak_bw_eff;
    report.bottleneck = report.arithmetic_intensity >= report.ridge_point
                            ? Bottleneck::compute_bound
                            : Bottleneck::memory_bound;
    report.assumption_dtype = dtype;

    report.problem_name = spec.name;
    report.hardware_name = hw.name;
    report.io_dtype = spec.io_dtype;
    report.fusion = spec.fusion;
    report.peak_flops_eff = limits.peak_flops_eff;
    report.peak_bw_eff = limits.peak_bw_eff;
    report.reference_clock_mhz = hw.reference_clock_mhz;
    report.current_clock_mhz = hw.current_clock_mhz;
    report.bw_clock_scaling = hw.bw_clock_scaling;
    for (std::size_t i = 0; i < spec.ops.size(); ++i) {
        report.op_summaries.push_back(Analyze(spec.ops[i], i, constants).summary);
    }
    return report;
}

SolReport sol_fp16_variant(const ProblemSpec& spec, const HardwareSpec& hw,
                           const FlopConstants& constants) {
    return sol(spec, hw, DType::fp16, constants);
}

namespace {

std::string FormatSi(double value, const char* unit) {
    std::ostringstream out;
    out.precision(4);
    out << value << " " << unit;
    return out.str();
}

}  // namespace

std::string render_sol_report(const SolReport& r) {
    std::ostringstream out;
    out.precision(6);
    std::string bar(64, '=');
    out << bar << "\n";
    out << "SOL Report: " << r.problem_name << "\n";
    out << bar << "\n\n";

    out << "1. Problem characterization\n";
    for (std::size_t i = 0; i < r.op_summaries.size(); ++i) {
        out << "   op[" << i << "]: " << r.op_summaries[i] << "\n";
    }
    out << "   io dtype: " << to_string(r.io_dtype) << "\n";
    out << "   fusion: " << to_string(r.fusion) << "\n";
    out << "   total FLOPs: " << std::fixed << std::setprecision(0) << r.flops << "\n";
    out << "   best-case DRAM bytes: " << r.bytes << "\n";
    out.unsetf(std::ios_base::floatfield);
    out << std::setprecision(6);
    if (r.per_op_breakdown.size() > 1) {
        for (const OpCost& cost : r.per_op_breakdown) {
            out << "   op[" << cost.op_index << "] flops=" << cost.flops
                << " bytes=" << cost.bytes << "\n";
        }
    }
    out << "\n";

    out << "2. Hardware limits\n";
    out << "   hardware: " << r.hardware_name << "\n";
    out << "   math precision assumed: " << to_string(r.assumption_dtype) << "\n";
    out << "   peak compute: " << FormatSi(r.peak_flops_eff, "FLOP/s") << "\n";
    out << "   peak bandwidth: " << FormatSi(r.peak_bw_eff, "B/s") << "\n";
    out << "   clocks: current " << r.current_clock_mhz << " MHz / reference "
        << r.reference_clock_mhz << " MHz (bandwidth scaling: "
        << (r.bw_clock_scaling ? "on" : "off") << ")\n\n";

    out << "3. Roofline bound\n";
    out << "   arithmetic intensity: " << r.arithmetic_intensity << " FLOP/B\n";
    out << "   ridge point: " << r.ridge_point << " FLOP/B\n";
    out << "   T_compute: " << r.t_compute << " s\n";
    out << "   T_mem: " << r.t_mem << " s\n";
    out << "   t_SOL: " << r.t_sol << " s\n\n";

    out << "4. Bottleneck classification\n";
    out << "   " << (r.bottleneck == Bottleneck::compute_bound ? "compute-bound"
                                                               : "memory-bound")
        << " (AI " << r.arithmetic_intensity
        << (r.arithmetic_intensity >= r.ridge_point ? " >= " : " < ") << "ridge "
        << r.ridge_point << ")\n\n";

    out << "Note: this bound assumes perfect caching and reads each unique input\n"
           "element once; if on-chip buffers cannot hold reused data, real kernels\n"
           "will run slower than the bound. Sparsity is not modeled.\n";
    return out.str();
}

namespace {

nlohmann::json CostsToJson(const std::vector<OpCost>& costs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const OpCost& cost : costs) {
        arr.push_back({{"op_index", cost.op_index},
                       {"flops", cost.flops},
                       {"bytes", cost.bytes}});
    }
    return arr;
}

}  // namespace

std::string sol_report_to_json(const SolReport& r) {
    nlohmann::json j = {
        {"problem", r.problem_name},
        {"hardware", r.hardware_name},
        {"io_dtype", to_string(r.io_dtype)},
        {"fusion", to_string(r.fusion)},
        {"assumption_dtype", to_string(r.assumption_dtype)},
        {"flops", r.flops},
        {"bytes", r.bytes},
        {"arithmetic_intensity", r.arithmetic_intensity},
        {"ridge_point", r.ridge_point},
        {"t_compute", r.t_compute},
        {"t_mem", r.t_mem},
        {"t_sol", r.t_sol},
        {"bottleneck", to_string(r.bottleneck)},
        {"peak_flops_eff", r.peak_flops_eff},
        {"peak_bw_eff", r.peak_bw_eff},
        {"reference_clock_mhz", r.reference_clock_mhz},
        {"current_clock_mhz", r.current_clock_mhz},
        {"bw_clock_scaling", r.bw_clock_scaling},
        {"per_op_breakdown", CostsToJson(r.per_op_breakdown)},
        {"op_summaries", r.op_summaries},
    };
    return j.dump(2) + "\n";
}

SolReport sol_report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad SOL report JSON: ") + e.what());
    }
    SolReport r;
    try {
        r.problem_name = j.value("problem", "");
        r.hardware_name = j.value("hardware", "");
        r.io_dtype = dtype_from_string(j.value("io_dtype", "fp32")).value_or(DType::fp32);
        r.fusion = j.value("fusion", "perfect") == std::string("none") ? Fusion::none
                                                                       : Fusion::perfect;
        r.assumption_dtype =
            dtype_from_string(j.value("assumption_dtype", "fp32")).value_or(DType::fp32);
        r.flops = j.at("flops").get<double>();
        r.bytes = j.at("bytes").get<double>();
        r.arithmetic_intensity = j.at("arithmetic_intensity").get<double>();
        r.ridge_point = j.at("ridge_point").get<double>();
        r.t_compute = j.at("t_compute").get<double>();
        r.t_mem = j.at("t_mem").get<double>();
        r.t_sol = j.at("t_sol").get<double>();
        r.bottleneck = j.at("bottleneck").get<std::string>() == "memory_bound"
                           ? Bottleneck::memory_bound
                           : Bottleneck::compute_bound;
        r.peak_flops_eff = j.value("peak_flops_eff", 0.0);
        r.peak_bw_eff = j.value("peak_bw_eff", 0.0);
        r.reference_clock_mhz = j.value("reference_clock_mhz", 0.0);
        r.current_clock_mhz = j.value("current_clock_mhz", 0.0);
        r.bw_clock_scaling = j.value("bw_clock_scaling", false);
        if (j.contains("per_op_breakdown")) {
            for (const auto& item : j["per_op_breakdown"]) {
                OpCost cost;
                cost.op_index = item.value("op_index", 0u);
                cost.flops = item.value("flops", 0.0);
                cost.bytes = item.value("bytes", 0.0);
                r.per_op_breakdown.push_back(cost);
            }
        }
        if (j.contains("op_summaries")) {
            r.op_summaries = j["op_summaries"].get<std::vector<std::string>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad SOL report JSON: ") + e.what());
    }
    return r;
}

namespace {

std::int64_t RequireInt(const nlohmann::json& j, const char* key, std::size_t index) {
    if (!j.contains(key)) {
        BadSpec("op " + std::to_string(index) + ": missing '" + key + "'");
    }
    return j.at(key).get<std::int64_t>();
}

}  // namespace

ProblemSpec problem_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("bad problem spec JSON: ") + e.what());
    }
    ProblemSpec spec;
    try {
        spec.name = j.value("name", "unnamed");
        std::string fusion = j.value("fusion", "perfect");
        if (fusion != "perfect" && fusion != "none") {
            throw SpecError("fusion must be 'perfect' or 'none', got '" + fusion + "'");
        }
        spec.fusion = fusion == "none" ? Fusion::none : Fusion::perfect;
        std::string io = j.value("io_dtype", "fp32");
        auto dtype = dtype_from_string(io);
        if (!dtype) throw SpecError("unknown io_dtype '" + io + "'");
        spec.io_dtype = *dtype;
        if (!j.contains("ops") || !j["ops"].is_array() || j["ops"].empty()) {
            throw SpecError("problem spec requires a nonempty 'ops' array");
        }
        std::size_t index = 0;
        for (const auto& item : j["ops"]) {
            OpNode op;
            std::string kind = item.value("kind", "");
            auto parsed = op_node_kind_from_string(kind);
            if (!parsed) {
                throw SpecError("op " + std::to_string(index) + ": unknown kind '" +
                                kind + "'");
            }
            op.kind = *parsed;
            const nlohmann::json& dims =
                item.contains("dims") ? item["dims"] : nlohmann::json::object();
            switch (op.kind) {
                case OpNodeKind::gemm:
                    op.m = RequireInt(dims, "M", index);
                    op.n = RequireInt(dims, "N", index);
                    op.k = RequireInt(dims, "K", index);
                    break;
                case OpNodeKind::batched_gemm:
                    op.batch = RequireInt(dims, "B", index);
                    op.m = RequireInt(dims, "M", index);
                    op.n = RequireInt(dims, "N", index);
                    op.k = RequireInt(dims, "K", index);
                    break;
                case OpNodeKind::grouped_gemm: {
                    if (!dims.contains("groups") || !dims["groups"].is_array()) {
                        throw SpecError("op " + std::to_string(index) +
                                        ": grouped_gemm requires dims.groups");
                    }
                    for (const auto& group : dims["groups"]) {
                        GroupDims g;
                        g.m = RequireInt(group, "M", index);
                        g.n = RequireInt(group, "N", index);
                        g.k = RequireInt(group, "K", index);
                        op.groups.push_back(g);
                    }
                    break;
                }
                case OpNodeKind::conv1d:
                case OpNodeKind::conv2d:
                case OpNodeKind::conv3d:
                    op.conv_n = RequireInt(dims, "N", index);
                    op.conv_c = RequireInt(dims, "C", index);
                    op.conv_k = RequireInt(dims, "K", index);
                    op.conv_groups = dims.value("groups", 1);
                    op.spatial = dims.value("spatial", std::vector<std::int64_t>{});
                    op.kernel = dims.value("kernel", std::vector<std::int64_t>{});
                    op.stride = dims.value("stride", std::vector<std::int64_t>{});
                    op.pad = dims.value("pad", std::vector<std::int64_t>{});
                    break;
                case OpNodeKind::elementwise:
                    op.elems = RequireInt(dims, "elems", index);
                    op.flops_per_elem = dims.value("flops_per_elem", 1.0);
                    break;
                default:
                    op.elems = RequireInt(dims, "elems", index);
                    op.axis = dims.value("axis", 1);
                    break;
            }
            spec.ops.push_back(op);
            ++index;
        }
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("bad problem spec JSON: ") + e.what());
    }
    return spec;
}

HardwareSpec hardware_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw HwError(std::string("bad hardware spec JSON: ") + e.what());
    }
    HardwareSpec hw;
    try {
        hw.name = j.value("name", "unnamed");
        if (!j.contains("peak_flops") || !j["peak_flops"].is_object()) {
            throw HwError("hardware spec requires a peak_flops map");
        }
        for (const auto& [key, value] : j["peak_flops"].items()) {
            auto dtype = dtype_from_string(key);
            if (!dtype) throw HwError("unknown dtype '" + key + "' in peak_flops");
            double rate = value.get<double>();
            if (rate <= 0) throw HwError("peak_flops[" + key + "] must be > 0");
            hw.peak_flops[*dtype] = rate;
        }
        hw.peak_bw = j.at("peak_bw").get<double>();
        if (hw.peak_bw <= 0) throw HwError("peak_bw must be > 0");
        hw.reference_clock_mhz = j.value("reference_clock_mhz", 1500.0);
        hw.current_clock_mhz = j.value("current_clock_mhz", 1500.0);
        if (hw.reference_clock_mhz <= 0 || hw.current_clock_mhz <= 0) {
            throw HwError("clocks must be > 0");
        }
        hw.bw_clock_scaling = j.value("bw_clock_scaling", false);
    } catch (const nlohmann::json::exception& e) {
        throw HwError(std::string("bad hardware spec JSON: ") + e.what());
    }
    return hw;
}

FlopConstants flop_constants_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("bad flop constants JSON: ") + e.what());
    }
    FlopConstants constants;
    constants.reduction = j.value("reduction", constants.reduction);
    constants.softmax = j.value("softmax", constants.softmax);
    constants.layernorm = j.value("layernorm", constants.layernorm);
    constants.rmsnorm = j.value("rmsnorm", constants.rmsnorm);
    constants.cumulative_scan = j.value("cumulative_scan", constants.cumulative_scan);
    return constants;
}

}  // namespace ucutlass
