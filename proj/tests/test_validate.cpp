#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "ucutlass/lower.hpp"
#include "ucutlass/parser.hpp"
#include "ucutlass/validate.hpp"

#include "testutil.hpp"

using namespace ucutlass;

namespace {

ValidationReport check(const std::string& source) { return validate(lower(parse(source))); }

bool has_message(const ValidationReport& report, const std::string& needle) {
    for (const auto& d : report.diagnostics) {
        if (d.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

// --- R1: operator / architecture ranges -------------------------------------

TEST_CASE("R1 exhaustive operator-by-arch grid matches the coverage table") {
    for (const auto& [op, band] : testutil::op_coverage_table()) {
        for (const std::string& arch : testutil::all_arch_names()) {
            ValidationReport report = check(op + "().with_arch(" + arch + ")");
            const bool expected = testutil::op_expected_ok(band, arch);
            CAPTURE(op);
            CAPTURE(arch);
            CHECK(report.ok == expected);
            if (!expected) CHECK(report.has_rule("R1", Severity::error));
        }
    }
}

TEST_CASE("R1 conv3d_wgrad carries the dedicated SM90 message") {
    ValidationReport report = check("conv3d_wgrad().with_arch(sm_90a)");
    CHECK(!report.ok);
    CHECK(has_message(report, "Conv3d wgrad unsupported on SM90+"));
}

TEST_CASE("R1 errors point at the nearest legal arch") {
    CHECK(has_message(check("grouped_gemm().with_arch(sm_75)"), "nearest legal arch is sm_80"));
    CHECK(has_message(check("grouped_conv().with_arch(sm_90)"), "nearest legal arch is sm_89"));
}

// --- R2: feature / architecture ranges ---------------------------------------

TEST_CASE("R2 exhaustive feature-by-arch grid matches the coverage table") {
    for (const auto& cell : testutil::feature_coverage_table()) {
        for (const std::string& arch : testutil::all_arch_names()) {
            ValidationReport report = check(testutil::instantiate_feature(cell, arch));
            const bool expected = testutil::feature_expected_ok(cell, arch);
            CAPTURE(cell.feature);
            CAPTURE(arch);
            CHECK(report.ok == expected);
        }
    }
}

TEST_CASE("R2 custom epilogue is rejected on plain sm_90") {
    ValidationReport report = check("gemm().with_arch(sm_90) >> custom('acc * 2')");
    CHECK(!report.ok);
    CHECK(report.has_rule("R2", Severity::error));
    CHECK(has_message(report, "sm_90a"));
}

TEST_CASE("R2 legal operand swap downgrades to a runtime-assert warning") {
    ValidationReport report = check("gemm().with_arch(sm_90).with_operand_swap(true)");
    CHECK(report.ok);
    CHECK(report.has_rule("R2", Severity::warning));
    CHECK(has_message(report, "asserts M == N at runtime"));
}

TEST_CASE("R2 operand swap reports every violated precondition") {
    // fp16 input and conv host on sm_80: three independent errors.
    ValidationReport report =
        check("conv2d().with_arch(sm_80).with_dtype(input=fp16).with_operand_swap(false)");
    CHECK(!report.ok);
    CHECK(report.error_count() >= 3);
    CHECK(has_message(report, "requires SM90+"));
    CHECK(has_message(report, "applies only to fp32 inputs"));
    CHECK(has_message(report, "applies only to gemm"));
}

TEST_CASE("R2 errors carry the nearest legal arch hint") {
    ValidationReport report = check("gemm().with_arch(sm_90a).with_tile(m=128, n=64, k=32)");
    CHECK(!report.ok);
    CHECK(has_message(report, "nearest legal arch is sm_89"));
    report = check("gemm().with_arch(sm_75).with_cluster(x=2, y=1, z=1)");
    CHECK(has_message(report, "nearest legal arch is sm_90"));
}

// --- R3: dtype / architecture -------------------------------------------------

TEST_CASE("R3 fp8 requires SM90 or newer") {
    for (const char* slot : {"input", "acc", "output"}) {
        ValidationReport report =
            check("gemm().with_arch(sm_80).with_dtype(" + std::string(slot) + "=fp8)");
        CAPTURE(slot);
        CHECK(!report.ok);
        CHECK(report.has_rule("R3", Severity::error));
    }
    CHECK(check("gemm().with_arch(sm_90).with_dtype(input=fp8)").ok);
    CHECK(check("gemm().with_arch(sm_90a).with_dtype(input=fp8, output=fp8)").ok);
}

// --- R4: tile vs threadblock shape -------------------------------------------

TEST_CASE("R4 tile and threadblockshape are mutually exclusive") {
    ValidationReport report = check(
        "gemm().with_arch(sm_80).with_tile(m=128, n=64, k=32)"
        ".with_threadblockshape(m=128, n=128, k=64)");
    CHECK(!report.ok);
    CHECK(report.has_rule("R4", Severity::error));
    // The out-of-band shape also fires R2 on sm_80.
    CHECK(report.has_rule("R2", Severity::error));
}

// --- R5: epilogue parameter schemas -------------------------------------------

TEST_CASE("R5 clip and clamp require an ordered min/max pair") {
    CHECK(check("gemm() >> clip(min=0, max=6)").ok);
    CHECK(check("gemm() >> clamp(min=-2, max=2)").ok);

    ValidationReport missing = check("gemm() >> clip(min=0)");
    CHECK(!missing.ok);
    CHECK(missing.has_rule("R5", Severity::error));
    CHECK(has_message(missing, "requires both min and max"));

    ValidationReport inverted = check("gemm() >> clip(min=7, max=0)");
    CHECK(!inverted.ok);
    CHECK(has_message(inverted, "min (7) must be <= max (0)"));
}

TEST_CASE("R5 leaky_relu requires a slope") {
    CHECK(check("gemm() >> leaky_relu(slope=1)").ok);
    ValidationReport report = check("gemm() >> leaky_relu()");
    CHECK(!report.ok);
    CHECK(has_message(report, "requires slope"));
}

TEST_CASE("R5 zero-parameter epilogues reject stray parameters") {
    ValidationReport report = check("gemm() >> relu(alpha=2)");
    CHECK(!report.ok);
    CHECK(report.has_rule("R5", Severity::error));
    CHECK(has_message(report, "takes no parameters"));
    CHECK(check("gemm() >> bias() >> gelu() >> scale()").ok);
}

TEST_CASE("R5 unknown clip parameter names the allowed set") {
    ValidationReport report = check("gemm() >> clip(min=0, max=6, mode=2)");
    CHECK(!report.ok);
    CHECK(has_message(report, "allowed parameters: max, min"));
}

TEST_CASE("R5 diagnostics name the epilogue position") {
    ValidationReport report = check("gemm() >> relu() >> clip(min=1)");
    REQUIRE(!report.diagnostics.empty());
    CHECK(report.diagnostics[0].field == "epilogue[1]");
}

// --- R6: depthwise on SM90 -----------------------------------------------------

TEST_CASE("R6 depthwise on SM90 always warns about the CuTe backend") {
    ValidationReport report = check("depthwise_conv().with_arch(sm_90)");
    CHECK(report.ok);
    CHECK(report.has_rule("R6", Severity::warning));
    CHECK(has_message(report, "limited stride/dilation and epilogue support"));
    // Pre-SM90 depthwise has no such warning.
    CHECK(!check("depthwise_conv().with_arch(sm_89)").has_rule("R6", Severity::warning));
}

TEST_CASE("R6 depthwise on SM90 allows at most a relu epilogue") {
    CHECK(check("depthwise_conv().with_arch(sm_90) >> relu()").ok);
    ValidationReport report = check("depthwise_conv().with_arch(sm_90a) >> gelu()");
    CHECK(!report.ok);
    CHECK(report.has_rule("R6", Severity::error));
    // The same chain is fine on sm_89 through the native template path.
    CHECK(check("depthwise_conv().with_arch(sm_89) >> gelu()").ok);
}

// --- R7: pipeline dtype chain ---------------------------------------------------

TEST_CASE("R7 pipeline pre-transform dtype must match the kernel input") {
    CHECK(check("pipeline(transpose(dtype=fp16), "
                "gemm().with_arch(sm_80).with_dtype(input=fp16))")
              .ok);
    ValidationReport report =
        check("pipeline(transpose(dtype=fp16), gemm().with_arch(sm_80))");
    CHECK(!report.ok);
    CHECK(report.has_rule("R7", Severity::error));
    CHECK(has_message(report, "pipeline dtype chain mismatch"));
    // A post-transform conversion is downstream of the kernel: no constraint.
    CHECK(check("pipeline(gemm().with_arch(sm_80), transpose(dtype=fp16))").ok);
    // Only the last pre-transform feeds the kernel.
    CHECK(check("pipeline(transpose(dtype=fp16), transpose(dtype=fp32), "
                "gemm().with_arch(sm_80))")
              .ok);
}

// --- R8: alignment ---------------------------------------------------------------

TEST_CASE("R8 alignment zero is an error") {
    ValidationReport report = check("gemm().with_alignment(A=0, B=8, C=8)");
    CHECK(!report.ok);
    CHECK(report.has_rule("R8", Severity::error));
    CHECK(report.diagnostics[0].field == "alignment.A");
}

TEST_CASE("R8 suspicious alignments warn without rejecting") {
    ValidationReport non_pow2 = check("gemm().with_alignment(A=3, B=8, C=8)");
    CHECK(non_pow2.ok);
    CHECK(non_pow2.has_rule("R8", Severity::warning));
    CHECK(has_message(non_pow2, "not a power of two"));

    ValidationReport too_wide = check("gemm().with_alignment(A=32, B=8, C=8)");
    CHECK(too_wide.ok);
    CHECK(has_message(too_wide, "exceeds 16 elements"));

    // 16 fp32 elements exceed the 32-byte vector width.
    ValidationReport wide_fp32 = check("gemm().with_alignment(A=16, B=8, C=8)");
    CHECK(wide_fp32.ok);
    CHECK(has_message(wide_fp32, "with fp32 exceeds"));

    // The same width is fine for fp16 operands.
    ValidationReport wide_fp16 =
        check("gemm().with_dtype(input=fp16).with_alignment(A=16, B=8, C=8)");
    CHECK(wide_fp16.ok);
    CHECK(wide_fp16.warning_count() == 0);
}

TEST_CASE("R8 C alignment is judged against the output dtype") {
    ValidationReport report =
        check("gemm().with_dtype(input=fp16, output=fp32).with_alignment(A=16, B=8, C=16)");
    CHECK(report.ok);
    // A is fp16 (fine at 16); C is fp32 (warns at 16).
    REQUIRE(report.warning_count() == 1);
    CHECK(report.diagnostics[0].field == "alignment.C");
}

// --- report plumbing ---------------------------------------------------------------

TEST_CASE("reports collect every violated rule, not just the first") {
    ValidationReport report = check(
        "conv3d_wgrad().with_arch(sm_90a)"
        ".with_tile(m=64, n=64, k=16)"
        ".with_alignment(A=0, B=8, C=8)"
        " >> leaky_relu()");
    CHECK(!report.ok);
    CHECK(report.has_rule("R1", Severity::error));   // op out of range
    CHECK(report.has_rule("R2", Severity::error));   // tile on SM90
    CHECK(report.has_rule("R5", Severity::error));   // slope missing
    CHECK(report.has_rule("R8", Severity::error));   // alignment zero
    CHECK(report.error_count() >= 4);
}

TEST_CASE("clean configs validate with ok and zero diagnostics") {
    ValidationReport report = check(
        "gemm().with_dtype(input=fp16, acc=fp32, output=fp16)"
        ".with_layout(A=RowMajor, B=RowMajor, C=RowMajor)"
        ".with_arch(sm_90a)"
        ".with_threadblockshape(m=128, n=128, k=64)"
        ".with_stages(2)"
        ".with_alignment(A=8, B=8, C=8)"
        ".with_scheduler(kernel=tma, epilogue=tma)"
        " >> bias() >> gelu() >> clip(min=0, max=6)");
    CHECK(report.ok);
    CHECK(report.diagnostics.empty());
}

TEST_CASE("random valid programs validate without errors") {
    testutil::Rng rng(424242);
    for (int i = 0; i < 500; ++i) {
        std::string text = testutil::render_program(testutil::random_valid_program(rng));
        CAPTURE(text);
        ValidationReport report = check(text);
        CHECK(report.ok);
    }
}

TEST_CASE("report_to_jsonl emits one record per diagnostic") {
    ValidationReport report = check("gemm().with_arch(sm_75).with_operand_swap(true)");
    std::string jsonl = report_to_jsonl(report);
    std::size_t lines = 0;
    for (char ch : jsonl) {
        if (ch == '\n') ++lines;
    }
    CHECK(lines == report.diagnostics.size());
    CHECK(jsonl.find("\"rule_id\":\"R2\"") != std::string::npos);
    CHECK(jsonl.find("\"severity\":\"error\"") != std::string::npos);
}
