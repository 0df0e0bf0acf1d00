#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "ucutlass/emit.hpp"
#include "ucutlass/hash.hpp"
#include "ucutlass/lower.hpp"
#include "ucutlass/parser.hpp"

#include "testutil.hpp"

using namespace ucutlass;

namespace {

EmittedArtifact emit_source(const std::string& source) { return emit(lower(parse(source))); }

KernelConfig kernel_of_source(const std::string& source) {
    return std::get<KernelConfig>(lower(parse(source)));
}

std::string golden_path(const std::string& name) {
    return std::string(UCUTLASS_TEST_DIR) + "/goldens/" + name;
}

const char* kFigureProgram =
    "gemm().with_dtype(input=fp16, acc=fp32, output=fp16)"
    ".with_layout(A=RowMajor, B=RowMajor, C=RowMajor)"
    ".with_arch(sm_90a)"
    ".with_threadblockshape(m=128, n=128, k=64)"
    ".with_stages(2)"
    ".with_alignment(A=8, B=8, C=8)"
    ".with_scheduler(kernel=tma, epilogue=tma)"
    " >> bias() >> gelu() >> clip(min=0, max=6)";

}  // namespace

TEST_CASE("backend selection dispatches on arch and operator family") {
    CHECK(select_backend(kernel_of_source("gemm().with_arch(sm_90a)")) ==
          Backend::collective_builder);
    CHECK(select_backend(kernel_of_source("gemm().with_arch(sm_90)")) ==
          Backend::collective_builder);
    CHECK(select_backend(kernel_of_source("grouped_gemm().with_arch(sm_90)")) ==
          Backend::collective_builder);
    CHECK(select_backend(kernel_of_source("gemm().with_arch(sm_89)")) ==
          Backend::legacy_template);
    CHECK(select_backend(kernel_of_source("conv2d().with_arch(sm_90a)")) ==
          Backend::legacy_template);
    CHECK(select_backend(kernel_of_source("conv2d().with_arch(sm_75)")) ==
          Backend::legacy_template);
    CHECK(select_backend(kernel_of_source("depthwise_conv().with_arch(sm_90)")) ==
          Backend::cute_depthwise);
    CHECK(select_backend(kernel_of_source("depthwise_conv().with_arch(sm_80)")) ==
          Backend::legacy_template);
}

TEST_CASE("emit refuses configs that do not validate") {
    CHECK_THROWS_AS(emit_source("gemm().with_arch(sm_90a).with_tile(m=64, n=64, k=16)"),
                    EmitError);
    CHECK_THROWS_AS(emit_source("conv3d_wgrad().with_arch(sm_90a)"), EmitError);
    try {
        emit_source("gemm().with_arch(sm_75).with_cluster(x=2, y=1, z=1)");
        FAIL("expected EmitError");
    } catch (const EmitError& e) {
        // The guard names the first failed rule to aid debugging.
        CHECK(std::string(e.what()).find("R2") != std::string::npos);
    }
}

TEST_CASE("artifact filename and namespace derive from the hash") {
    AnyConfig config = lower(parse(kFigureProgram));
    ConfigHash hash = config_hash(config);
    EmittedArtifact artifact = emit(config);
    CHECK(artifact.filename == "ucutlass_" + hash.hex.substr(0, 16) + ".h");
    CHECK(artifact.text.find("namespace " + hash.name_space + " {") != std::string::npos);
    CHECK(artifact.text.find("}  // namespace " + hash.name_space) != std::string::npos);
    CHECK(artifact.text.find("using " + hash.name_space + "::kernel_kernel;") !=
          std::string::npos);
}

TEST_CASE("emitted header embeds the original DSL source") {
    EmittedArtifact artifact = emit_source("gemm().with_arch(sm_80) >> relu()");
    CHECK(artifact.text.find("/* Original DSL:\ngemm().with_arch(sm_80) >> relu()\n*/") !=
          std::string::npos);
}

TEST_CASE("flagship program produces an in-order visitor tree") {
    EmittedArtifact artifact = emit_source(kFigureProgram);
    CHECK(artifact.backend == Backend::collective_builder);

    // Node aliases are declared in chain order...
    std::size_t bias = artifact.text.find("using EvtOp0_bias");
    std::size_t gelu = artifact.text.find("using EvtOp1_gelu");
    std::size_t clip = artifact.text.find("using EvtOp2_clip");
    REQUIRE(bias != std::string::npos);
    REQUIRE(gelu != std::string::npos);
    REQUIRE(clip != std::string::npos);
    CHECK(bias < gelu);
    CHECK(gelu < clip);

    // ...and the tree nests the first op innermost against the accumulator.
    std::size_t evt = artifact.text.find("using EpilogueFusion");
    REQUIRE(evt != std::string::npos);
    std::size_t outer = artifact.text.find("Sm90EVT<EvtOp2_clip", evt);
    std::size_t mid = artifact.text.find("Sm90EVT<EvtOp1_gelu", evt);
    std::size_t inner = artifact.text.find("Sm90EVT<EvtOp0_bias", evt);
    std::size_t acc = artifact.text.find("Sm90AccFetch", evt);
    REQUIRE(outer != std::string::npos);
    REQUIRE(mid != std::string::npos);
    REQUIRE(inner != std::string::npos);
    REQUIRE(acc != std::string::npos);
    CHECK(outer < mid);
    CHECK(mid < inner);
    CHECK(inner < acc);

    // Builder plumbing and schedule types are spelled out.
    CHECK(artifact.text.find("cutlass::gemm::collective::CollectiveBuilder") !=
          std::string::npos);
    CHECK(artifact.text.find("cutlass::gemm::KernelTmaWarpSpecialized;") !=
          std::string::npos);
    CHECK(artifact.text.find("cute::Shape<cute::Int<128>, cute::Int<128>, cute::Int<64>>") !=
          std::string::npos);
}

TEST_CASE("legacy path spells the pre-SM90 template parameters") {
    EmittedArtifact artifact = emit_source(
        "gemm().with_arch(sm_75).with_tile(m=128, n=64, k=32).with_swizzle(8)"
        " >> relu()");
    CHECK(artifact.backend == Backend::legacy_template);
    CHECK(artifact.text.find("cutlass::gemm::GemmShape<128, 64, 32>") != std::string::npos);
    // sm_75 uses the Turing instruction shape.
    CHECK(artifact.text.find("cutlass::gemm::GemmShape<16, 8, 8>") != std::string::npos);
    CHECK(artifact.text.find("GemmIdentityThreadblockSwizzle<8>") != std::string::npos);
    CHECK(artifact.text.find("cutlass::gemm::device::GemmUniversal<") != std::string::npos);
    // The epilogue chain is documented with its functor mapping.
    CHECK(artifact.text.find("relu -> cutlass::epilogue::thread::ReLU") != std::string::npos);
    // No SM90 machinery leaks into the legacy path.
    CHECK(artifact.text.find("Sm90EVT") == std::string::npos);
    CHECK(artifact.text.find("CollectiveBuilder") == std::string::npos);
}

TEST_CASE("conv emission carries iterator and split-k choices") {
    EmittedArtifact artifact = emit_source(
        "conv2d().with_arch(sm_80).with_iterator(analytic).with_split_k(slices=4)");
    CHECK(artifact.text.find("cutlass::conv::kernel::DefaultConv2dFprop") !=
          std::string::npos);
    CHECK(artifact.text.find("IteratorAlgorithm::kAnalytic") != std::string::npos);
    CHECK(artifact.text.find("SplitKMode::kParallel, 4") != std::string::npos);
    CHECK(artifact.text.find("ImplicitGemmConvolution") != std::string::npos);
}

TEST_CASE("conv variants map to their dedicated kernel templates") {
    CHECK(emit_source("conv2d_dgrad().with_arch(sm_80)")
              .text.find("DefaultConv2dDgrad") != std::string::npos);
    CHECK(emit_source("conv2d_wgrad().with_arch(sm_80)")
              .text.find("DefaultConv2dWgrad") != std::string::npos);
    CHECK(emit_source("conv3d().with_arch(sm_80)").text.find("DefaultConv3dFprop") !=
          std::string::npos);
    CHECK(emit_source("grouped_conv().with_arch(sm_80)")
              .text.find("DefaultConv2dGroupFprop") != std::string::npos);
    EmittedArtifact conv1d = emit_source("conv1d().with_arch(sm_80)");
    CHECK(conv1d.text.find("DefaultConv2dFprop") != std::string::npos);
    CHECK(conv1d.text.find("conv1d lowers to conv2d with H = 1") != std::string::npos);
}

TEST_CASE("cute depthwise path emits the direct-conv wrapper") {
    EmittedArtifact with_relu = emit_source("depthwise_conv().with_arch(sm_90) >> relu()");
    CHECK(with_relu.backend == Backend::cute_depthwise);
    CHECK(with_relu.text.find("CuTeDepthwiseDirectConv") != std::string::npos);
    CHECK(with_relu.text.find("cutlass::epilogue::thread::ReLU<ElementCompute>") !=
          std::string::npos);
    EmittedArtifact plain = emit_source("depthwise_conv().with_arch(sm_90a)");
    CHECK(plain.text.find("cutlass::epilogue::thread::Identity<ElementCompute>") !=
          std::string::npos);
}

TEST_CASE("operand swap inserts the square-problem runtime assertion") {
    EmittedArtifact artifact = emit_source("gemm().with_arch(sm_90).with_operand_swap(true)");
    CHECK(artifact.text.find(
              "TORCH_CHECK(M == N, \"operand_swap requires a square problem") !=
          std::string::npos);
    EmittedArtifact without = emit_source("gemm().with_arch(sm_90)");
    CHECK(without.text.find("operand_swap requires a square problem") == std::string::npos);
}

TEST_CASE("entrypoints cover the basic and extended wrappers") {
    EmittedArtifact artifact = emit_source(kFigureProgram);
    REQUIRE(artifact.entrypoints.size() == 2);
    CHECK(artifact.entrypoints[0] == "kernel_kernel");
    CHECK(artifact.entrypoints[1] == "kernel_kernel_ex");
    // The bias op needs an aux tensor: the extended form takes it, the basic
    // form forwards nullopt.
    CHECK(artifact.text.find("c10::optional<at::Tensor> bias_0") != std::string::npos);
    CHECK(artifact.text.find("return kernel_kernel_ex(A, B, C, alpha, beta, c10::nullopt)") !=
          std::string::npos);
}

TEST_CASE("aux parameters are emitted per epilogue op with unique names") {
    EmittedArtifact artifact = emit_source(
        "gemm().with_arch(sm_90a) >> scale() >> per_row_scale() >> scale()");
    CHECK(artifact.text.find("c10::optional<at::Tensor> scale_0") != std::string::npos);
    CHECK(artifact.text.find("c10::optional<at::Tensor> per_row_scale_1") !=
          std::string::npos);
    CHECK(artifact.text.find("c10::optional<at::Tensor> scale_2") != std::string::npos);
    // Three aux slots -> three forwarded nullopts.
    CHECK(artifact.text.find(
              "kernel_kernel_ex(A, B, C, alpha, beta, c10::nullopt, c10::nullopt, "
              "c10::nullopt)") != std::string::npos);
}

TEST_CASE("custom epilogue captures the expression in a functor") {
    EmittedArtifact artifact = emit_source(
        "gemm().with_arch(sm_90a) >> custom('gelu(acc) * s', inputs={s=aux0})");
    CHECK(artifact.text.find("struct CustomExpr0") != std::string::npos);
    CHECK(artifact.text.find("return gelu(acc) * s;") != std::string::npos);
    CHECK(artifact.text.find("T s /* aux0 */") != std::string::npos);
    CHECK(artifact.text.find("c10::optional<at::Tensor> aux0_0") != std::string::npos);
}

TEST_CASE("pipeline emission produces transforms and a driver") {
    AnyConfig config = lower(parse(
        "pipeline(transpose(), gemm().with_arch(sm_80) >> relu(), transpose(dtype=fp16))"));
    EmittedArtifact artifact = emit(config);
    CHECK(artifact.entrypoints == std::vector<std::string>{
                                      "transform_stage_0", "transform_stage_1",
                                      "kernel_stage", "kernel_kernel", "kernel_kernel_ex"});
    CHECK(artifact.text.find("inline at::Tensor transform_stage_0(") != std::string::npos);
    CHECK(artifact.text.find("inline at::Tensor transform_stage_1(") != std::string::npos);
    // The post-transform fuses the dtype conversion.
    CHECK(artifact.text.find("out = out.to(at::kHalf);") != std::string::npos);
    // Driver order: pre-transform, kernel, post-transform.
    std::size_t pre = artifact.text.find("staged = transform_stage_0(staged);");
    std::size_t kern = artifact.text.find("result = kernel_stage(staged, B, C");
    std::size_t post = artifact.text.find("result = transform_stage_1(result);");
    REQUIRE(pre != std::string::npos);
    REQUIRE(kern != std::string::npos);
    REQUIRE(post != std::string::npos);
    CHECK(pre < kern);
    CHECK(kern < post);
}

TEST_CASE("emission is deterministic") {
    AnyConfig config = lower(parse(kFigureProgram));
    CHECK(emit(config).text == emit(config).text);
}

TEST_CASE("lint_structure accepts balanced code and flags imbalance") {
    LintResult good = lint_structure("namespace x {\nint f() { return (1 + 2); }\n}  // namespace x\n");
    CHECK(good.ok());
    CHECK(good.namespace_opens == 1);
    CHECK(good.namespace_closes == 1);

    CHECK(!lint_structure("int f() { return 1;").braces_balanced);
    CHECK(!lint_structure("int f() { return g(1; }").parens_balanced);
    // Close-before-open is imbalance even though the totals match.
    CHECK(!lint_structure("} int f() {").braces_balanced);
    // Brackets inside comments and strings do not count.
    LintResult masked = lint_structure(
        "// unbalanced ( in a comment\n/* { */ const char* s = \"}}}\"; char c = '{';\n");
    CHECK(masked.braces_balanced);
    CHECK(masked.parens_balanced);
}

TEST_CASE("every random valid program emits structurally clean text") {
    testutil::Rng rng(99102);
    for (int i = 0; i < 300; ++i) {
        std::string text = testutil::render_program(testutil::random_valid_program(rng));
        CAPTURE(text);
        EmittedArtifact artifact = emit(lower(parse(text)));
        LintResult lint = lint_structure(artifact.text);
        CHECK(lint.ok());
        CHECK(artifact.text.find("kernel_kernel") != std::string::npos);
    }
}

TEST_CASE("golden: flagship SM90a GEMM with visitor tree") {
    EmittedArtifact artifact = emit_source(kFigureProgram);
    CHECK(artifact.text == testutil::read_file(golden_path("sm90a_gemm_evt.h")));
}

TEST_CASE("golden: legacy SM75 GEMM") {
    EmittedArtifact artifact = emit_source(
        "gemm().with_dtype(input=fp16, acc=fp32, output=fp16)"
        ".with_arch(sm_75).with_tile(m=128, n=64, k=32).with_swizzle(4) >> relu()");
    CHECK(artifact.text == testutil::read_file(golden_path("sm75_gemm_legacy.h")));
}

TEST_CASE("golden: conv with iterator and split-k") {
    EmittedArtifact artifact = emit_source(
        "conv2d().with_arch(sm_80).with_iterator(optimized).with_split_k(slices=2)"
        " >> bias() >> relu()");
    CHECK(artifact.text == testutil::read_file(golden_path("sm80_conv_splitk.h")));
}

TEST_CASE("golden: cute depthwise") {
    EmittedArtifact artifact = emit_source("depthwise_conv().with_arch(sm_90) >> relu()");
    CHECK(artifact.text == testutil::read_file(golden_path("sm90_depthwise_cute.h")));
}

TEST_CASE("golden: pipeline driver") {
    EmittedArtifact artifact = emit(lower(parse(
        "pipeline(transpose(dtype=fp16), "
        "gemm().with_arch(sm_90a).with_dtype(input=fp16) >> bias(), transpose())")));
    CHECK(artifact.text == testutil::read_file(golden_path("sm90a_pipeline.h")));
}
