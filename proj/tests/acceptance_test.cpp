// Release acceptance gate. Runs ten end-to-end criteria against the built
// library and prints exactly one [PASS]/[FAIL] line per criterion, with the
// tolerance pinned in the line. Exit status is 0 iff every criterion passed.
//
// Each criterion is checked against data or arithmetic derived independently
// of the implementation (hand-computed literals, transcribed coverage tables,
// a from-scratch scheduler simulator), so a pass is a genuine cross-check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ucutlass/config.hpp"
#include "ucutlass/emit.hpp"
#include "ucutlass/hash.hpp"
#include "ucutlass/integrity.hpp"
#include "ucutlass/logs.hpp"
#include "ucutlass/lower.hpp"
#include "ucutlass/metrics.hpp"
#include "ucutlass/parser.hpp"
#include "ucutlass/schedule.hpp"
#include "ucutlass/sol.hpp"
#include "ucutlass/triage.hpp"
#include "ucutlass/validate.hpp"

#include "testutil.hpp"

using namespace ucutlass;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure(what);
}

double rel_err(double actual, double expected) {
    if (expected == 0.0) return std::abs(actual);
    return std::abs(actual - expected) / std::abs(expected);
}

std::string fmt(double value, int precision = 6) {
    std::ostringstream out;
    out << std::setprecision(precision) << value;
    return out.str();
}

std::string config_file(const std::string& name) {
    return std::string(UCUTLASS_CONFIG_DIR) + "/" + name;
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

// --- criterion 1: end-to-end compile of the flagship program ---------------

std::string criterion_dsl_conformance() {
    const auto start = std::chrono::steady_clock::now();
    const DslProgram program = parse(kFigureProgram);
    const AnyConfig config = lower(program);
    const ValidationReport report = validate(config);
    expect(report.ok, "flagship program must validate with zero errors");
    const EmittedArtifact artifact = emit(config);
    const ConfigHash hash = config_hash(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(seconds < 1.0, "compile took " + fmt(seconds) + " s (limit 1 s)");

    expect(artifact.text.find("namespace " + hash.name_space + " {") != std::string::npos,
           "emitted header must open the content-addressed namespace");
    expect(artifact.filename == hash.name_space + ".h", "artifact filename must match namespace");
    expect(artifact.text.find("/* Original DSL:") != std::string::npos &&
               artifact.text.find(kFigureProgram) != std::string::npos,
           "emitted header must embed the source program comment");

    const std::size_t bias_pos = artifact.text.find("EvtOp0_bias");
    const std::size_t gelu_pos = artifact.text.find("EvtOp1_gelu");
    const std::size_t clip_pos = artifact.text.find("EvtOp2_clip");
    expect(bias_pos != std::string::npos && gelu_pos != std::string::npos &&
               clip_pos != std::string::npos,
           "epilogue fusion must contain bias, gelu, and clip nodes");
    expect(bias_pos < gelu_pos && gelu_pos < clip_pos,
           "epilogue nodes must appear in source order bias -> gelu -> clip");
    return "compiled in " + fmt(seconds * 1000.0, 3) +
           " ms (limit 1 s); namespace, source comment, and bias->gelu->clip order verified";
}

// --- criterion 2: exhaustive coverage matrix --------------------------------

std::string criterion_coverage_matrix() {
    int cells = 0;
    int mismatches = 0;
    std::string first_mismatch;
    auto check_cell = [&](const std::string& text, bool expected, const std::string& label) {
        ++cells;
        bool ok = false;
        try {
            ok = validate(lower(parse(text))).ok;
        } catch (const std::exception& e) {
            ++mismatches;
            if (first_mismatch.empty()) {
                first_mismatch = label + " failed to compile: " + e.what();
            }
            return;
        }
        if (ok != expected) {
            ++mismatches;
            if (first_mismatch.empty()) {
                first_mismatch = label + " expected " + (expected ? "accept" : "reject") +
                                 ", got " + (ok ? "accept" : "reject");
            }
        }
    };

    for (const auto& [op, band] : testutil::op_coverage_table()) {
        for (const std::string& arch : testutil::all_arch_names()) {
            check_cell(op + "().with_arch(" + arch + ")", testutil::op_expected_ok(band, arch),
                       op + " at " + arch);
        }
    }
    for (const testutil::FeatureCell& cell : testutil::feature_coverage_table()) {
        for (const std::string& arch : testutil::all_arch_names()) {
            check_cell(testutil::instantiate_feature(cell, arch),
                       testutil::feature_expected_ok(cell, arch), cell.feature + " at " + arch);
        }
    }
    expect(mismatches == 0,
           std::to_string(mismatches) + " mismatched cells; first: " + first_mismatch);
    return std::to_string(cells) + " operator/feature cells, zero mismatches";
}

// --- criterion 3: hash determinism ------------------------------------------

std::string criterion_hash_determinism() {
    testutil::Rng rng(424242);
    int permutations = 0;
    for (int program = 0; program < 50; ++program) {
        const testutil::ProgramParts parts = testutil::random_valid_program(rng);
        const ConfigHash canonical = config_hash(lower(parse(testutil::render_program(parts))));
        for (int shuffle = 0; shuffle < 20; ++shuffle) {
            const std::string text = testutil::render_shuffled(parts, rng);
            const ConfigHash shuffled = config_hash(lower(parse(text)));
            expect(shuffled == canonical, "binding permutation changed the hash for: " + text);
            ++permutations;
        }
    }
    expect(permutations == 1000, "expected exactly 1000 permutations");

    const KernelConfig base = std::get<KernelConfig>(lower(parse(
        "gemm().with_dtype(input=fp16, acc=fp32, output=fp16)"
        ".with_arch(sm_90a)"
        ".with_threadblockshape(m=128, n=128, k=64)"
        ".with_stages(2)"
        ".with_alignment(A=8, B=8, C=8)"
        " >> bias() >> clip(min=0, max=6)")));
    const std::string base_hex = config_hash(base).hex;
    using Mutation = std::pair<const char*, std::function<void(KernelConfig&)>>;
    const std::vector<Mutation> mutations = {
        {"op_kind", [](KernelConfig& m) { m.op_kind = OpKind::grouped_gemm; }},
        {"dtypes.input", [](KernelConfig& m) { m.dtypes.input = DType::bf16; }},
        {"dtypes.acc", [](KernelConfig& m) { m.dtypes.acc = DType::fp16; }},
        {"dtypes.output", [](KernelConfig& m) { m.dtypes.output = DType::fp32; }},
        {"layouts.B", [](KernelConfig& m) { m.layouts.b = Layout::ColMajor; }},
        {"arch", [](KernelConfig& m) { m.arch = Arch::sm_90; }},
        {"alignment.C", [](KernelConfig& m) { m.alignment.c = 4; }},
        {"stages", [](KernelConfig& m) { m.stages = 3; }},
        {"threadblock_shape.k", [](KernelConfig& m) { m.threadblock_shape->k = 32; }},
        {"threadblock_shape absent", [](KernelConfig& m) { m.threadblock_shape.reset(); }},
        {"cluster", [](KernelConfig& m) { m.cluster = Cluster{2, 1, 1}; }},
        {"scheduler",
         [](KernelConfig& m) {
             m.scheduler = SchedulerCfg{KernelSchedule::tma, EpilogueSchedule::tma};
         }},
        {"swizzle", [](KernelConfig& m) { m.swizzle = 8; }},
        {"iterator", [](KernelConfig& m) { m.iterator = IteratorKind::analytic; }},
        {"split_k", [](KernelConfig& m) { m.split_k = SplitK{2}; }},
        {"operand_swap true", [](KernelConfig& m) { m.operand_swap = true; }},
        {"operand_swap false", [](KernelConfig& m) { m.operand_swap = false; }},
        {"epilogue drop", [](KernelConfig& m) { m.epilogue.pop_back(); }},
        {"epilogue order", [](KernelConfig& m) { std::swap(m.epilogue[0], m.epilogue[1]); }},
        {"epilogue param",
         [](KernelConfig& m) { m.epilogue[1].params["max"] = Value{std::int64_t{7}}; }},
    };
    std::vector<std::string> seen = {base_hex};
    for (const auto& [what, mutate] : mutations) {
        KernelConfig mutated = base;
        mutate(mutated);
        const std::string hex = config_hash(mutated).hex;
        expect(std::find(seen.begin(), seen.end(), hex) == seen.end(),
               std::string("mutation '") + what + "' did not produce a fresh hash");
        seen.push_back(hex);
    }
    return "1000 binding permutations hash-stable; " + std::to_string(mutations.size()) +
           " single-field mutations all changed the hash";
}

// --- criterion 4: SOL arithmetic vs the hand oracle --------------------------

std::string criterion_sol_arithmetic() {
    const ProblemSpec spec =
        problem_spec_from_json(testutil::read_file(config_file("problem_gemm4096.json")));
    const HardwareSpec hw =
        hardware_spec_from_json(testutil::read_file(config_file("example_hardware.json")));

    // Hand oracle for the 4096^3 fp32 GEMM on the shipped hardware config:
    //   flops = 2 * 4096^3                  = 137438953472
    //   bytes = 3 * 4096^2 * 4              = 201326592
    //   t_compute = flops / 4.947e14        = 2.7782282893066505e-4 s
    //   t_mem     = bytes / 3.35e12         = 6.009749014925373e-5  s
    //   AI        = flops / bytes           = 682.6666666666666
    //   ridge     = 4.947e14 / 3.35e12      = 147.67164179104478
    const SolReport fp32 = sol(spec, hw, DType::fp32);
    const double tol = 1e-12;
    double worst = 0.0;
    auto check_value = [&](double actual, double expected, const char* what) {
        const double err = rel_err(actual, expected);
        worst = std::max(worst, err);
        expect(err <= tol, std::string(what) + " off by rel " + fmt(err, 3) + " (tol 1e-12): got " +
                               fmt(actual, 17) + ", want " + fmt(expected, 17));
    };
    check_value(fp32.flops, 137438953472.0, "flops");
    check_value(fp32.bytes, 201326592.0, "bytes");
    check_value(fp32.t_compute, 0.00027782282893066505, "t_compute");
    check_value(fp32.t_mem, 6.009749014925373e-05, "t_mem");
    check_value(fp32.t_sol, 0.00027782282893066505, "t_sol");
    check_value(fp32.arithmetic_intensity, 682.6666666666666, "arithmetic intensity");
    check_value(fp32.ridge_point, 147.67164179104478, "ridge point");
    expect(fp32.bottleneck == Bottleneck::compute_bound, "4096^3 GEMM must be compute-bound");

    const SolReport fp16 = sol_fp16_variant(spec, hw);
    check_value(fp16.t_compute, 0.00013891141446533252, "fp16 t_compute");
    expect(fp16.t_mem == fp32.t_mem, "fp16 variant must not change byte traffic");
    expect(fp16.t_sol <= fp32.t_sol, "fp16 bound must not exceed the fp32 bound");

    testutil::Rng rng(20260815);
    for (int trial = 0; trial < 500; ++trial) {
        const ProblemSpec random_spec = testutil::random_problem_spec(rng);
        const double bound32 = sol(random_spec, hw, DType::fp32).t_sol;
        const double bound16 = sol_fp16_variant(random_spec, hw).t_sol;
        expect(bound16 <= bound32,
               "fp16 bound exceeded fp32 bound on random spec trial " + std::to_string(trial));
    }
    return "all six roofline quantities within 1e-12 (worst rel err " + fmt(worst, 3) +
           "); fp16 bound <= fp32 bound on 500/500 random specs";
}

// --- criterion 5: ROI formula and ranking monotonicity -----------------------

std::string criterion_roi_formula() {
    const long double tol = 1e-12L;
    auto check_roi = [&](double s, double ri, double rp, double t_best, double t_sol,
                         long double expected) {
        Hypothesis h;
        h.id = "h";
        h.est_speedup = s;
        h.risk_impl = ri;
        h.risk_perf = rp;
        const long double actual = roi(h, GapContext{t_best, t_sol});
        const long double err = std::abs(actual - expected) / std::abs(expected);
        expect(err <= tol, "roi(S=" + fmt(s) + ", g=" + fmt(t_best / t_sol) + ") off by rel " +
                               fmt(static_cast<double>(err), 3));
    };
    // Linear regime (g <= 5): roi = S / (Ri * Rp), including the g = 0 limit.
    for (double g : {0.0, 0.5, 1.0, 2.5, 5.0}) {
        check_roi(3.0, 1.5, 2.0, g, 1.0, 3.0L / (1.5L * 2.0L));
        check_roi(1.75, 4.0, 5.0, g * 2.0, 2.0, 1.75L / (4.0L * 5.0L));
    }
    // One decade past the knee (g = 50): roi = S^2 / (Ri * Rp).
    check_roi(3.0, 1.5, 2.0, 50.0, 1.0, (3.0L * 3.0L) / (1.5L * 2.0L));
    check_roi(2.0, 1.0, 1.0, 100.0, 2.0, 4.0L);

    testutil::Rng rng(13337);
    int sets = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int count = testutil::rand_int(rng, 2, 12);
        std::vector<Hypothesis> hypotheses;
        for (int i = 0; i < count; ++i) {
            Hypothesis h;
            h.id = "h" + std::to_string(i);
            h.est_speedup = testutil::rand_real(rng, 1.0, 8.0);
            h.risk_impl = testutil::rand_real(rng, 1.0, 5.0);
            h.risk_perf = testutil::rand_real(rng, 1.0, 5.0);
            hypotheses.push_back(h);
        }
        const double t_sol = testutil::rand_real(rng, 0.1, 10.0);
        const GapContext ctx{testutil::rand_real(rng, 0.0, 20.0) * t_sol, t_sol};
        const std::vector<RankedHypothesis> ranked = rank(hypotheses, ctx);
        expect(ranked.size() == hypotheses.size(), "rank must keep every hypothesis");
        for (std::size_t i = 0; i + 1 < ranked.size(); ++i) {
            const RankedHypothesis& a = ranked[i];
            const RankedHypothesis& b = ranked[i + 1];
            expect(a.roi >= b.roi, "ranked roi values must be non-increasing");
            if (a.roi == b.roi) {
                expect(a.hypothesis.est_speedup >= b.hypothesis.est_speedup,
                       "roi ties must fall back to higher est_speedup");
                if (a.hypothesis.est_speedup == b.hypothesis.est_speedup) {
                    expect(a.hypothesis.id < b.hypothesis.id,
                           "full ties must be ordered by id");
                }
            }
        }
        for (const RankedHypothesis& row : ranked) {
            expect(row.roi == roi(row.hypothesis, ctx), "ranked roi must equal a fresh roi()");
        }
        // Widening the gap never lowers roi when S >= 1.
        const long double narrow = roi(hypotheses[0], GapContext{1.0 * t_sol, t_sol});
        const long double wide = roi(hypotheses[0], GapContext{80.0 * t_sol, t_sol});
        expect(wide >= narrow, "roi must be non-decreasing in the gap for S >= 1");
        ++sets;
    }
    return "closed-form identities within 1e-12; ordering and gap monotonicity held on " +
           std::to_string(sets) + " random hypothesis sets";
}

// --- criterion 6: scheduler replay vs from-scratch simulator -----------------

struct OracleOutcome {
    int attempts = 0;
    std::int64_t tokens = 0;
    std::optional<double> t_best;
    double speedup = 1.0;
    StopReason reason = StopReason::budget_exhausted;
};

// Independent restatement of the documented stopping semantics, written
// directly from the policy definition (per-problem; the dealing order across
// problems cannot affect outcomes because problems share no state).
OracleOutcome simulate_problem(const ProblemLog& log, const SchedulingPolicy& policy) {
    OracleOutcome out;
    bool solved = false;
    double best = std::numeric_limits<double>::infinity();
    int stall = 0;
    std::size_t pos = 0;
    bool stopped = false;
    const std::size_t item_size =
        log.unit == ScheduleUnit::iteration
            ? static_cast<std::size_t>(log.iteration_shape->attempts_per_iteration())
            : 1;
    while (!stopped && pos < log.attempts.size()) {
        for (std::size_t k = 0; k < item_size && pos < log.attempts.size(); ++k) {
            const AttemptRecord& attempt = log.attempts[pos++];
            out.attempts += 1;
            out.tokens += attempt.tokens;
            bool improved = false;
            if (attempt.correct && !attempt.excluded_by_integrity && attempt.runtime_s &&
                (!solved || *attempt.runtime_s < best)) {
                best = *attempt.runtime_s;
                solved = true;
                improved = true;
            }
            const bool ahead = solved && best < log.t_ref;
            stall = (!ahead || improved) ? 0 : stall + 1;
        }
        const bool ahead = solved && best < log.t_ref;
        if (!ahead) continue;
        if (policy.epsilon && best <= (1.0 + *policy.epsilon) * log.t_sol) {
            stopped = true;
            out.reason = StopReason::sol_gap;
        } else if (policy.window_w > 0 && stall >= policy.window_w) {
            stopped = true;
            out.reason = StopReason::no_progress;
        }
    }
    if (solved) {
        out.t_best = best;
        out.speedup = log.t_ref / best;
    }
    return out;
}

std::string criterion_scheduler_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::optional<double>> epsilons = {std::nullopt, 0.0, 0.25, 0.5, 1.0};
    const std::vector<int> windows = {0, 1, 3, 8};

    testutil::Rng rng(606060);
    long comparisons = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::vector<ProblemLog> logs = testutil::random_logs(rng);
        for (const std::optional<double>& epsilon : epsilons) {
            for (int window : windows) {
                SchedulingPolicy policy;
                policy.epsilon = epsilon;
                policy.window_w = window;
                const ScheduleResult actual = replay(logs, policy);
                expect(actual.per_problem.size() == logs.size(),
                       "replay must report every problem");
                for (const ProblemOutcome& outcome : actual.per_problem) {
                    const auto log_it =
                        std::find_if(logs.begin(), logs.end(), [&](const ProblemLog& log) {
                            return log.problem_id == outcome.problem_id;
                        });
                    expect(log_it != logs.end(), "replay reported an unknown problem");
                    const OracleOutcome oracle = simulate_problem(*log_it, policy);
                    const std::string where = "trial " + std::to_string(trial) + ", problem " +
                                              outcome.problem_id + ", epsilon=" +
                                              (epsilon ? fmt(*epsilon) : "disabled") +
                                              ", window=" + std::to_string(window);
                    expect(outcome.attempts_consumed == oracle.attempts,
                           "attempts_consumed diverged at " + where);
                    expect(outcome.tokens_consumed == oracle.tokens,
                           "tokens_consumed diverged at " + where);
                    expect(outcome.t_best_final == oracle.t_best,
                           "t_best diverged at " + where);
                    expect(outcome.speedup_final == oracle.speedup,
                           "speedup diverged at " + where);
                    expect(outcome.stop_reason == oracle.reason,
                           "stop_reason diverged at " + where);
                    ++comparisons;
                }
            }
        }
        // Fixed allocation: the both-disabled policy must consume everything
        // and serialize byte-identically to the sweep's fixed baseline.
        if (trial < 50) {
            const ScheduleResult fixed_run = replay(logs, SchedulingPolicy{});
            for (const ProblemOutcome& outcome : fixed_run.per_problem) {
                const auto log_it =
                    std::find_if(logs.begin(), logs.end(), [&](const ProblemLog& log) {
                        return log.problem_id == outcome.problem_id;
                    });
                expect(outcome.attempts_consumed ==
                           static_cast<int>(log_it->attempts.size()),
                       "fixed allocation must consume every attempt");
                expect(outcome.stop_reason == StopReason::budget_exhausted,
                       "fixed allocation can only stop on budget exhaustion");
            }
            const SweepResult swept = sweep(logs, {std::nullopt, 0.25}, {0, 3});
            expect(schedule_result_to_table(swept.fixed) ==
                       schedule_result_to_table(fixed_run),
                   "sweep fixed baseline must serialize byte-identically to the "
                   "both-disabled replay");
            expect(schedule_result_to_table(swept.cells[0].result) ==
                       schedule_result_to_table(fixed_run),
                   "the (disabled, 0) sweep cell must serialize byte-identically to the "
                   "both-disabled replay");
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(seconds < 30.0, "criterion took " + fmt(seconds) + " s (limit 30 s)");
    return "1000 random log sets x 20 policies: " + std::to_string(comparisons) +
           " per-problem outcomes matched the independent simulator exactly; fixed "
           "allocation byte-identical; " +
           fmt(seconds, 3) + " s (limit 30 s)";
}

// --- criterion 7: efficiency-gain arithmetic ---------------------------------

std::string criterion_efficiency_gain() {
    // Constructed so the epsilon = 0.25 policy stops after attempt 1:
    //   policy:  t_best 12.5, tokens 5700  -> speedup 8.0
    //   fixed:   t_best 12.0, tokens 10000 -> speedup 8.3333...
    //   retention  = 8.0 / (100/12) = 0.96 exactly
    //   token cost = 5700 / 10000   = 0.57 exactly
    //   gain       = 0.96 / 0.57    = 1.6842105...
    ProblemLog log;
    log.problem_id = "flagship";
    log.t_ref = 100.0;
    log.t_sol = 10.0;
    AttemptRecord first;
    first.problem_id = log.problem_id;
    first.index = 1;
    first.runtime_s = 12.5;
    first.correct = true;
    first.tokens = 5700;
    AttemptRecord second = first;
    second.index = 2;
    second.runtime_s = 12.0;
    second.tokens = 4300;
    log.attempts = {first, second};

    SchedulingPolicy policy;
    policy.epsilon = 0.25;
    const ScheduleResult result = replay({log}, policy);
    expect(result.per_problem.at(0).attempts_consumed == 1,
           "policy must stop after the first attempt");
    expect(result.total_tokens == 5700, "policy tokens must be 5700");
    expect(result.fixed_total_tokens == 10000, "fixed tokens must be 10000");
    expect(rel_err(result.retention_geomean, 0.96) <= 1e-12,
           "retention must be 0.96, got " + fmt(result.retention_geomean, 17));
    const double cost_ratio = static_cast<double>(result.total_tokens) /
                              static_cast<double>(result.fixed_total_tokens);
    expect(rel_err(cost_ratio, 0.57) <= 1e-12, "token cost ratio must be 0.57");
    expect(std::abs(result.efficiency_gain - 1.684) <= 1e-3,
           "efficiency gain must be 1.684 +/- 0.001, got " + fmt(result.efficiency_gain, 17));

    const ScheduleResult fixed_run = replay({log}, SchedulingPolicy{});
    expect(efficiency_gain(result, fixed_run) == result.efficiency_gain,
           "standalone efficiency_gain must agree with the replay field");
    return "retention 0.96 x token ratio 0.57 -> gain " + fmt(result.efficiency_gain, 10) +
           " within 1.684 +/- 0.001";
}

// --- criterion 8: signed-area identity ---------------------------------------

std::string criterion_signed_area() {
    testutil::Rng rng(246810);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int problems = testutil::rand_int(rng, 1, 40);
        const SpeedupSet a = testutil::random_speedup_set(rng, problems);
        const SpeedupSet b = testutil::random_speedup_set(rng, problems);
        const double exact = signed_area(a, b);
        const double integrated = signed_area_by_integration(a, b);
        const double diff = std::abs(exact - integrated);
        worst = std::max(worst, diff);
        expect(diff <= 1e-6, "trial " + std::to_string(trial) + ": |mean-difference - " +
                                 "trapezoid| = " + fmt(diff, 3) + " (tol 1e-6)");
    }
    return "1000 random curve pairs: mean-difference vs trapezoid integration, worst |diff| " +
           fmt(worst, 3) + " (tol 1e-6)";
}

// --- criterion 9: integrity precedence ----------------------------------------

std::string criterion_integrity_precedence() {
    // Strict 0.9 * t_sol boundary: 0.9 * 10.0 rounds to exactly 9.0 in binary64.
    expect(sol_ceiling_check(8.9999999999, 10.0), "runtime below the ceiling must flag");
    expect(!sol_ceiling_check(9.0, 10.0), "runtime exactly at 0.9 * t_sol must not flag");
    expect(!sol_ceiling_check(9.0000000001, 10.0), "runtime above the ceiling must not flag");

    // Full truth table; the expectation is restated here independently of the
    // implementation's precedence chain.
    struct ReviewerOption {
        const char* name;
        std::optional<ReviewerLabel> label;
    };
    const std::vector<ReviewerOption> reviewer_options = {
        {"absent", std::nullopt},
        {"NoIssues", ReviewerLabel{ReviewerLabel::Kind::NoIssues, std::nullopt}},
        {"MinorIssues",
         ReviewerLabel{ReviewerLabel::Kind::MinorIssues, Subcategory::cached_parameter}},
        {"Gaming", ReviewerLabel{ReviewerLabel::Kind::Gaming, Subcategory::fake_transpose}},
    };
    int cells = 0;
    for (bool ceiling : {false, true}) {
        for (bool pytorch : {false, true}) {
            for (const ReviewerOption& reviewer : reviewer_options) {
                for (bool prior : {false, true}) {
                    ReviewOutcome expected;
                    if (pytorch) {
                        expected.label = OutcomeLabel::PyTorchOnly;
                    } else if (ceiling) {
                        expected.label = OutcomeLabel::SolCeiling;
                    } else if (reviewer.label &&
                               reviewer.label->kind == ReviewerLabel::Kind::Gaming) {
                        expected.label = prior ? OutcomeLabel::InheritedGaming
                                               : OutcomeLabel::OriginalGaming;
                        if (!prior) expected.subcategory = reviewer.label->subcategory;
                    } else if (reviewer.label &&
                               reviewer.label->kind == ReviewerLabel::Kind::MinorIssues) {
                        expected.label = OutcomeLabel::MinorIssues;
                        expected.subcategory = reviewer.label->subcategory;
                    } else {
                        expected.label = OutcomeLabel::NoIssues;
                    }
                    expected.accepted = expected.label == OutcomeLabel::NoIssues ||
                                        expected.label == OutcomeLabel::MinorIssues;

                    const ReviewOutcome actual =
                        combine(ceiling, pytorch, reviewer.label, prior);
                    const std::string where = std::string("ceiling=") +
                                              (ceiling ? "1" : "0") + " pytorch=" +
                                              (pytorch ? "1" : "0") + " reviewer=" +
                                              reviewer.name + " prior=" + (prior ? "1" : "0");
                    expect(actual.label == expected.label,
                           "label mismatch at " + where + ": got " + to_string(actual.label) +
                               ", want " + to_string(expected.label));
                    expect(actual.subcategory == expected.subcategory,
                           "subcategory mismatch at " + where);
                    expect(actual.accepted == expected.accepted,
                           "accepted mismatch at " + where);
                    ++cells;
                }
            }
        }
    }

    // Inheritance over a run is outcome-based: only attempts whose final label
    // was a gaming label start or extend the chain, so a PyTorchOnly override
    // keeps the next Gaming attempt Original.
    const auto gaming = [](std::optional<Subcategory> subcategory) {
        return ReviewerLabel{ReviewerLabel::Kind::Gaming, subcategory};
    };
    ProblemLog chain;
    chain.problem_id = "p";
    chain.t_ref = 100.0;
    chain.t_sol = 10.0;
    for (int i = 1; i <= 5; ++i) {
        AttemptRecord attempt;
        attempt.problem_id = "p";
        attempt.index = i;
        attempt.runtime_s = 50.0;
        attempt.correct = true;
        chain.attempts.push_back(attempt);
    }
    EvidenceMap evidence;
    evidence["p"][1].reviewer = gaming(Subcategory::fake_transpose);
    evidence["p"][2].reviewer = gaming(Subcategory::constant_hardcoded_output);
    evidence["p"][4].reviewer = gaming(std::nullopt);
    const std::vector<AttemptOutcomeRow> rows = review_run({chain}, evidence);
    expect(rows.size() == 5, "review_run must produce one row per attempt");
    expect(rows[0].outcome.label == OutcomeLabel::OriginalGaming &&
               rows[0].outcome.subcategory == Subcategory::fake_transpose,
           "first gaming attempt must be Original with its subcategory");
    expect(rows[1].outcome.label == OutcomeLabel::InheritedGaming &&
               !rows[1].outcome.subcategory,
           "second gaming attempt must inherit without a subcategory");
    expect(rows[2].outcome.label == OutcomeLabel::NoIssues,
           "unlabeled attempts never inherit gaming");
    expect(rows[3].outcome.label == OutcomeLabel::InheritedGaming,
           "later gaming attempts keep inheriting");

    ProblemLog override_chain = chain;
    override_chain.problem_id = "q";
    override_chain.attempts.resize(2);
    for (AttemptRecord& attempt : override_chain.attempts) attempt.problem_id = "q";
    EvidenceMap override_evidence;
    override_evidence["q"][1].reviewer = gaming(Subcategory::fake_transpose);
    override_evidence["q"][1].pytorch_only = true;
    override_evidence["q"][2].reviewer = gaming(Subcategory::fake_transpose);
    const std::vector<AttemptOutcomeRow> override_rows =
        review_run({override_chain}, override_evidence);
    expect(override_rows[0].outcome.label == OutcomeLabel::PyTorchOnly,
           "pytorch_only must override a Gaming reviewer label");
    expect(override_rows[1].outcome.label == OutcomeLabel::OriginalGaming,
           "a PyTorchOnly outcome must not seed gaming inheritance");

    return std::to_string(cells) +
           "-cell truth table exact; 0.9 boundary strict; inheritance outcome-based with "
           "PyTorchOnly overriding Gaming";
}

// --- criterion 10: integrity filtering lowers inflated speedups --------------

std::string criterion_filter_direction() {
    // Problem "fast" has its fastest attempt below the SOL ceiling; the filter
    // must fall back to the slower honest attempt.
    ProblemLog fast;
    fast.problem_id = "fast";
    fast.t_ref = 100.0;
    fast.t_sol = 10.0;
    AttemptRecord cheat;
    cheat.problem_id = "fast";
    cheat.index = 1;
    cheat.runtime_s = 8.0;  // below 0.9 * 10
    cheat.correct = true;
    AttemptRecord honest = cheat;
    honest.index = 2;
    honest.runtime_s = 15.0;
    fast.attempts = {cheat, honest};

    ProblemLog clean;
    clean.problem_id = "clean";
    clean.t_ref = 100.0;
    clean.t_sol = 10.0;
    AttemptRecord only = cheat;
    only.problem_id = "clean";
    only.runtime_s = 20.0;
    clean.attempts = {only};

    const std::vector<ProblemLog> logs = {fast, clean};
    const std::vector<AttemptOutcomeRow> outcomes = review_run(logs, {});

    SpeedupSet unfiltered;  // best measured correct attempt, labels ignored
    unfiltered.entries["fast"] = 100.0 / 8.0;
    unfiltered.entries["clean"] = 100.0 / 20.0;
    const SpeedupSet filtered = filter_speedups(logs, outcomes);
    expect(filtered.entries.at("fast") == 100.0 / 15.0,
           "filter must fall back to the honest attempt");
    expect(filtered.entries.at("clean") == 100.0 / 20.0,
           "filter must keep clean problems unchanged");

    const double unfiltered_geomean = summarize(unfiltered).geomean;
    const double filtered_geomean = summarize(filtered).geomean;
    expect(filtered_geomean < unfiltered_geomean,
           "filtered geomean must drop below the unfiltered geomean");
    return "filtered geomean " + fmt(filtered_geomean, 6) + " < unfiltered " +
           fmt(unfiltered_geomean, 6) + " once the ceiling-flagged attempt is rejected";
}

struct Criterion {
    int number;
    const char* name;
    std::function<std::string()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "dsl-conformance", criterion_dsl_conformance},
        {2, "coverage-matrix", criterion_coverage_matrix},
        {3, "hash-determinism", criterion_hash_determinism},
        {4, "sol-arithmetic", criterion_sol_arithmetic},
        {5, "roi-formula", criterion_roi_formula},
        {6, "scheduler-oracle", criterion_scheduler_oracle},
        {7, "efficiency-gain", criterion_efficiency_gain},
        {8, "signed-area-identity", criterion_signed_area},
        {9, "integrity-precedence", criterion_integrity_precedence},
        {10, "filter-direction", criterion_filter_direction},
    };

    int passed = 0;
    for (const Criterion& criterion : criteria) {
        std::string detail;
        bool ok = true;
        try {
            detail = criterion.run();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        if (ok) ++passed;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << std::setw(2)
                  << criterion.number << " " << std::left << std::setw(22) << criterion.name
                  << std::right << " : " << detail << "\n";
    }
    std::cout << "acceptance: " << passed << "/" << criteria.size() << " criteria passed\n";
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
