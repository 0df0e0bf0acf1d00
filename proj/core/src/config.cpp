#include "ucutlass/config.hpp"

namespace ucutlass {

namespace {

const std::pair<DType, const char*> kDTypes[] = {
    {DType::fp64, "fp64"}, {DType::fp32, "fp32"}, {DType::fp16, "fp16"},
    {DType::bf16, "bf16"}, {DType::fp8, "fp8"},   {DType::int8, "int8"},
};

const std::pair<Layout, const char*> kLayouts[] = {
    {Layout::RowMajor, "RowMajor"},
    {Layout::ColMajor, "ColMajor"},
    {Layout::NHWC, "NHWC"},
    {Layout::NDHWC, "NDHWC"},
};

const std::pair<Arch, const char*> kArchs[] = {
    {Arch::sm_70, "sm_70"}, {Arch::sm_75, "sm_75"}, {Arch::sm_80, "sm_80"},
    {Arch::sm_86, "sm_86"}, {Arch::sm_89, "sm_89"}, {Arch::sm_90, "sm_90"},
    {Arch::sm_90a, "sm_90a"},
};

const std::pair<KernelSchedule, const char*> kKernelSchedules[] = {
    {KernelSchedule::tma, "tma"},
    {KernelSchedule::cooperative, "cooperative"},
    {KernelSchedule::pingpong, "pingpong"},
    {KernelSchedule::dflt, "default"},
};

const std::pair<EpilogueSchedule, const char*> kEpilogueSchedules[] = {
    {EpilogueSchedule::tma, "tma"},
    {EpilogueSchedule::dflt, "default"},
};

const std::pair<IteratorKind, const char*> kIterators[] = {
    {IteratorKind::analytic, "analytic"},
    {IteratorKind::optimized, "optimized"},
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

}  // namespace

const char* to_string(OpKind v) {
    switch (v) {
        case OpKind::gemm: return "gemm";
        case OpKind::grouped_gemm: return "grouped_gemm";
        case OpKind::conv1d: return "conv1d";
        case OpKind::conv2d: return "conv2d";
        case OpKind::conv3d: return "conv3d";
        case OpKind::conv2d_dgrad: return "conv2d_dgrad";
        case OpKind::conv2d_wgrad: return "conv2d_wgrad";
        case OpKind::conv3d_dgrad: return "conv3d_dgrad";
        case OpKind::conv3d_wgrad: return "conv3d_wgrad";
        case OpKind::depthwise_conv: return "depthwise_conv";
        case OpKind::grouped_conv: return "grouped_conv";
    }
    return "?";
}

const char* to_string(DType v) { return LookupName(kDTypes, v); }
const char* to_string(Layout v) { return LookupName(kLayouts, v); }
const char* to_string(Arch v) { return LookupName(kArchs, v); }
const char* to_string(KernelSchedule v) { return LookupName(kKernelSchedules, v); }
const char* to_string(EpilogueSchedule v) { return LookupName(kEpilogueSchedules, v); }
const char* to_string(IteratorKind v) { return LookupName(kIterators, v); }

std::optional<DType> dtype_from_string(const std::string& text) {
    return LookupEnum(kDTypes, text);
}
std::optional<Layout> layout_from_string(const std::string& text) {
    return LookupEnum(kLayouts, text);
}
std::optional<Arch> arch_from_string(const std::string& text) {
    return LookupEnum(kArchs, text);
}
std::optional<KernelSchedule> kernel_schedule_from_string(const std::string& text) {
    return LookupEnum(kKernelSchedules, text);
}
std::optional<EpilogueSchedule> epilogue_schedule_from_string(const std::string& text) {
    return LookupEnum(kEpilogueSchedules, text);
}
std::optional<IteratorKind> iterator_from_string(const std::string& text) {
    return LookupEnum(kIterators, text);
}

int arch_level(Arch arch) {
    switch (arch) {
        case Arch::sm_70: return 70;
        case Arch::sm_75: return 75;
        case Arch::sm_80: return 80;
        case Arch::sm_86: return 86;
        case Arch::sm_89: return 89;
        case Arch::sm_90: return 90;
        case Arch::sm_90a: return 90;
    }
    return 0;
}

bool is_arch_90a(Arch arch) { return arch == Arch::sm_90a; }

bool is_gemm_family(OpKind op) {
    return op == OpKind::gemm || op == OpKind::grouped_gemm;
}

bool is_conv_family(OpKind op) { return !is_gemm_family(op); }

bool is_conv3d_family(OpKind op) {
    return op == OpKind::conv3d || op == OpKind::conv3d_dgrad ||
           op == OpKind::conv3d_wgrad;
}

}  // namespace ucutlass
