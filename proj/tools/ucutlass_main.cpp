// Command-line entry point: compile, sol, triage, replay, sweep, metrics,
// and review subcommands over the core library.
//
// Conventions: data goes to stdout, diagnostics go to stderr (one
// machine-parseable line per error), exit 0 on success, 1 on
// validation/domain errors, 2 on usage errors.

#include <CLI11.hpp>

#include <cxxabi.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ucutlass/chart.hpp"
#include "ucutlass/diagnostics.hpp"
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

namespace fs = std::filesystem;
using namespace ucutlass;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string error_kind(const std::exception& e) {
    int status = 0;
    char* demangled = abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status);
    std::string name = (status == 0 && demangled) ? demangled : typeid(e).name();
    std::free(demangled);
    const std::size_t pos = name.rfind("::");
    if (pos != std::string::npos) name = name.substr(pos + 2);
    return name;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw DomainError(flag + ": cannot parse '" + item + "' as a number");
        }
    }
    if (values.empty()) throw DomainError(flag + ": empty list");
    return values;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> values;
    for (double v : parse_double_list(text, flag)) values.push_back(static_cast<int>(v));
    return values;
}

std::vector<std::optional<double>> parse_epsilon_list(const std::string& text) {
    std::vector<std::optional<double>> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "disabled" || item == "off" || item == "none") {
            values.push_back(std::nullopt);
            continue;
        }
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw DomainError("--epsilons: cannot parse '" + item +
                              "' (number or 'disabled' expected)");
        }
    }
    if (values.empty()) throw DomainError("--epsilons: empty list");
    return values;
}

// Load a run log from a JSONL file, or concatenate every *.jsonl in a
// directory (sorted by name) into one log set.
std::vector<ProblemLog> load_logs(const std::string& path) {
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
                files.push_back(entry.path());
            }
        }
        if (files.empty()) throw IoError("no .jsonl run logs found in '" + path + "'");
        std::sort(files.begin(), files.end());
        std::string combined;
        for (const fs::path& file : files) combined += read_file(file.string());
        return run_logs_from_jsonl(combined);
    }
    return run_logs_from_jsonl(read_file(path));
}

// --- compile -------------------------------------------------------------

struct CompileOptions {
    std::string file;
    std::string text;
    std::string out_dir;
};

int run_compile(const CompileOptions& options) {
    const std::string source = options.text.empty() ? read_file(options.file) : options.text;
    const DslProgram program = parse(source);
    const AnyConfig config = lower(program);
    const ValidationReport report = validate(config);
    if (!report.diagnostics.empty()) std::cerr << report_to_jsonl(report);
    if (!report.ok) return 1;
    const EmittedArtifact artifact = emit(config);
    const ConfigHash hash = config_hash(config);
    if (!options.out_dir.empty()) {
        fs::create_directories(options.out_dir);
        write_file((fs::path(options.out_dir) / artifact.filename).string(), artifact.text);
        std::cout << hash.name_space << "\n";
    } else {
        std::cout << artifact.text;
        std::cerr << "namespace: " << hash.name_space << "\n";
    }
    return 0;
}

// --- sol -----------------------------------------------------------------

struct SolOptions {
    std::string problem_path;
    std::string hardware_path;
    std::string constants_path;
    std::string precision = "fp32";
    bool json = false;
};

int run_sol(const SolOptions& options) {
    const ProblemSpec spec = problem_spec_from_json(read_file(options.problem_path));
    const HardwareSpec hw = hardware_spec_from_json(read_file(options.hardware_path));
    FlopConstants constants;
    if (!options.constants_path.empty()) {
        constants = flop_constants_from_json(read_file(options.constants_path));
    }
    const std::optional<DType> dtype = dtype_from_string(options.precision);
    if (!dtype) throw DomainError("--precision: unknown dtype '" + options.precision + "'");
    const SolReport report = sol(spec, hw, *dtype, constants);
    if (options.json) {
        std::cout << sol_report_to_json(report) << "\n";
    } else {
        std::cout << render_sol_report(report);
    }
    return 0;
}

// --- triage ----------------------------------------------------------------

struct TriageOptions {
    std::string hypotheses_path;
    double t_best = 0;
    double t_sol = 0;
    bool csv = false;
};

int run_triage(const TriageOptions& options) {
    const std::vector<Hypothesis> hypotheses =
        hypotheses_from_jsonl(read_file(options.hypotheses_path));
    const GapContext ctx{options.t_best, options.t_sol};
    const std::vector<RankedHypothesis> ranked = rank(hypotheses, ctx);
    std::cout << (options.csv ? ranked_to_csv(ranked) : ranked_to_jsonl(ranked));
    return 0;
}

// --- replay ----------------------------------------------------------------

struct ReplayOptions {
    std::string logs_path;
    std::optional<double> epsilon;
    int window = 0;
    bool csv = false;
};

int run_replay(const ReplayOptions& options) {
    const std::vector<ProblemLog> logs = load_logs(options.logs_path);
    SchedulingPolicy policy;
    policy.epsilon = options.epsilon;
    policy.window_w = options.window;
    const ScheduleResult result = replay(logs, policy);
    if (options.csv) {
        std::cout << "problem_id,attempts_consumed,tokens_consumed,t_best_s,speedup,stop_reason\n";
        std::ostringstream rows;
        rows.precision(12);
        for (const ProblemOutcome& outcome : result.per_problem) {
            rows << outcome.problem_id << "," << outcome.attempts_consumed << ","
                 << outcome.tokens_consumed << ",";
            if (outcome.t_best_final) rows << *outcome.t_best_final;
            rows << "," << outcome.speedup_final << "," << to_string(outcome.stop_reason) << "\n";
        }
        std::cout << rows.str();
    } else {
        std::cout << schedule_result_to_table(result);
    }
    return 0;
}

// --- sweep -----------------------------------------------------------------

struct SweepOptions {
    std::string logs_path;
    std::string epsilons = "0.25,0.5,0.75,1.0,1.25,1.5,1.75,2.0,2.25,2.5,2.75,3.0";
    std::string windows = "0,4,8,12,16,20";
    double min_retention = 0.0;
    std::string pricing_path;
    std::string model;
    std::string out_dir;
    std::string plot_path;
};

int run_sweep(const SweepOptions& options) {
    const std::vector<ProblemLog> logs = load_logs(options.logs_path);
    const PricingConfig pricing = options.pricing_path.empty()
                                      ? default_pricing()
                                      : pricing_from_json(read_file(options.pricing_path));
    const SweepResult swept =
        sweep(logs, parse_epsilon_list(options.epsilons),
              parse_int_list(options.windows, "--windows"), options.min_retention, pricing,
              options.model);

    // Create the output directory up front so a --plot path inside it works.
    if (!options.out_dir.empty()) fs::create_directories(options.out_dir);
    if (!options.plot_path.empty()) {
        ChartSpec chart;
        chart.title = "Token cost vs geomean speedup";
        chart.x_label = "normalized token cost";
        chart.y_label = "geomean speedup";
        ChartSeries cells;
        cells.name = "policies";
        cells.scatter = true;
        for (const SweepCell& cell : swept.cells) {
            cells.points.emplace_back(cell.normalized_cost, cell.result.geomean_speedup);
        }
        ChartSeries frontier;
        frontier.name = "Pareto frontier";
        for (std::size_t idx : swept.pareto_indices) {
            frontier.points.emplace_back(swept.cells[idx].normalized_cost,
                                         swept.cells[idx].result.geomean_speedup);
        }
        chart.series = {cells, frontier};
        write_file(options.plot_path, render_svg(chart));
    }

    if (!options.out_dir.empty()) {
        write_file((fs::path(options.out_dir) / "sweep.csv").string(), sweep_to_csv(swept));
        write_file((fs::path(options.out_dir) / "pareto.csv").string(), pareto_to_csv(swept));
        std::cout << "wrote sweep.csv and pareto.csv to " << options.out_dir << "\n";
    } else {
        std::cout << pareto_to_csv(swept);
    }
    if (swept.best_under_retention) {
        const SweepCell& best = swept.cells[*swept.best_under_retention];
        std::ostringstream line;
        line.precision(6);
        line << "best policy (retention >= " << swept.min_retention << "): epsilon=";
        if (best.epsilon) {
            line << *best.epsilon;
        } else {
            line << "disabled";
        }
        line << " window=" << best.window_w << " cost=" << best.normalized_cost
             << " retention=" << best.result.retention_geomean << "\n";
        std::cout << line.str();
    }
    return 0;
}

// --- metrics -----------------------------------------------------------------

struct MetricsOptions {
    std::string speedups_path;
    std::string baseline_path;
    std::string convention = "fallback_one";
    std::string thresholds;
    std::string curve_path;
    std::string plot_path;
    std::string logs_path;
    double attempt_target = 0.0;
    std::string attempt_curve_path;
    std::string attempt_plot_path;
};

UnsolvedConvention convention_from_string(const std::string& text) {
    if (text == "fallback_one") return UnsolvedConvention::fallback_one;
    if (text == "zero") return UnsolvedConvention::zero;
    throw DomainError("--convention: expected fallback_one or zero, got '" + text + "'");
}

int run_metrics(const MetricsOptions& options) {
    const UnsolvedConvention convention = convention_from_string(options.convention);
    const SpeedupSet set = speedup_set_from_csv(read_file(options.speedups_path), convention);
    const SpeedupSummary summary = summarize(set);
    std::cout << summary_to_text(summary);

    std::optional<SpeedupSet> baseline;
    if (!options.baseline_path.empty()) {
        baseline = speedup_set_from_csv(read_file(options.baseline_path), convention);
        std::ostringstream line;
        line.precision(9);
        line << "signed area vs baseline: " << signed_area(set, *baseline) << "\n";
        std::cout << line.str();
    }

    const std::vector<double> grid = options.thresholds.empty()
                                         ? exact_thresholds(set)
                                         : parse_double_list(options.thresholds, "--thresholds");
    if (!options.curve_path.empty()) {
        write_file(options.curve_path, fast_p_to_csv(fast_p(set, grid)));
    }
    if (!options.plot_path.empty()) {
        ChartSpec chart;
        chart.title = "Fast-p";
        chart.x_label = "speedup threshold r";
        chart.y_label = "% problems with speedup >= r";
        chart.step = true;
        const std::vector<double> plot_grid = plot_thresholds(set);
        ChartSeries main_series;
        main_series.name = "speedups";
        const FastPCurve main_curve = fast_p(set, plot_grid);
        for (std::size_t i = 0; i < plot_grid.size(); ++i) {
            main_series.points.emplace_back(main_curve.thresholds[i], main_curve.values[i]);
        }
        chart.series.push_back(main_series);
        if (baseline) {
            ChartSeries base_series;
            base_series.name = "baseline";
            const FastPCurve base_curve = fast_p(*baseline, plot_grid);
            for (std::size_t i = 0; i < plot_grid.size(); ++i) {
                base_series.points.emplace_back(base_curve.thresholds[i], base_curve.values[i]);
            }
            chart.series.push_back(base_series);
        }
        write_file(options.plot_path, render_svg(chart));
    }
    if (options.attempt_target > 0) {
        if (options.logs_path.empty()) {
            throw DomainError("--attempt-target requires --logs");
        }
        const AttemptFastPCurve curve =
            attempt_fast_p(load_logs(options.logs_path), options.attempt_target);
        if (options.attempt_curve_path.empty()) {
            std::cout << attempt_fast_p_to_csv(curve);
        } else {
            write_file(options.attempt_curve_path, attempt_fast_p_to_csv(curve));
        }
        if (!options.attempt_plot_path.empty()) {
            ChartSpec chart;
            chart.title = "Attempt-Fast-p";
            chart.x_label = "attempts";
            chart.y_label = "% problems at target";
            chart.step = true;
            ChartSeries series;
            std::ostringstream name;
            name << "speedup target " << options.attempt_target;
            series.name = name.str();
            for (std::size_t i = 0; i < curve.values.size(); ++i) {
                series.points.emplace_back(static_cast<double>(i + 1), curve.values[i]);
            }
            chart.series.push_back(series);
            write_file(options.attempt_plot_path, render_svg(chart));
        }
    } else if (!options.attempt_plot_path.empty()) {
        throw DomainError("--attempt-plot requires --attempt-target");
    }
    return 0;
}

// --- review ------------------------------------------------------------------

struct ReviewOptions {
    std::string logs_path;
    std::string labels_path;
    std::string profiles_dir;
    std::string patterns_path;
    std::string filtered_path;
    std::string convention = "fallback_one";
};

int run_review(const ReviewOptions& options) {
    const std::vector<ProblemLog> logs = load_logs(options.logs_path);
    EvidenceMap evidence;
    if (!options.labels_path.empty()) {
        evidence = evidence_from_labels(labels_from_jsonl(read_file(options.labels_path)));
    }
    if (!options.profiles_dir.empty()) {
        const PatternConfig patterns = options.patterns_path.empty()
                                           ? default_patterns()
                                           : patterns_from_json(read_file(options.patterns_path));
        // Profile files are named "<problem_id>__<attempt index>.txt".
        for (const ProblemLog& log : logs) {
            for (const AttemptRecord& attempt : log.attempts) {
                const fs::path file = fs::path(options.profiles_dir) /
                                      (log.problem_id + "__" + std::to_string(attempt.index) +
                                       ".txt");
                if (!fs::exists(file)) continue;
                const ProfileLog profile = parse_ncu_summary(read_file(file.string()));
                evidence[log.problem_id][attempt.index].pytorch_only =
                    pytorch_only_check(profile, patterns);
            }
        }
    }
    const std::vector<AttemptOutcomeRow> outcomes = review_run(logs, evidence);
    std::cout << outcomes_to_csv(outcomes);
    if (!options.filtered_path.empty()) {
        const SpeedupSet filtered =
            filter_speedups(logs, outcomes, convention_from_string(options.convention));
        write_file(options.filtered_path, speedup_set_to_csv(filtered));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ucutlass: kernel-config DSL compiler and analysis toolkit"};
    app.require_subcommand(1);

    CompileOptions compile_options;
    CLI::App* compile_cmd =
        app.add_subcommand("compile", "Compile a DSL program to a CUTLASS header");
    auto* input_group = compile_cmd->add_option_group("input");
    input_group->add_option("--file", compile_options.file, "DSL source file");
    input_group->add_option("--text", compile_options.text, "DSL program text");
    input_group->require_option(1);
    compile_cmd->add_option("--out", compile_options.out_dir,
                            "Output directory (header to stdout when omitted)");

    SolOptions sol_options;
    CLI::App* sol_cmd = app.add_subcommand("sol", "Speed-of-light roofline analysis");
    sol_cmd->add_option("--problem", sol_options.problem_path, "Problem spec JSON")->required();
    sol_cmd->add_option("--hardware", sol_options.hardware_path, "Hardware spec JSON")
        ->required();
    sol_cmd->add_option("--precision", sol_options.precision, "Math precision (fp32|fp16)");
    sol_cmd->add_option("--constants", sol_options.constants_path, "FLOP constants JSON");
    sol_cmd->add_flag("--json", sol_options.json, "Emit a JSON record instead of the report");

    TriageOptions triage_options;
    CLI::App* triage_cmd = app.add_subcommand("triage", "Rank hypotheses by gap-aware ROI");
    triage_cmd->add_option("--hypotheses", triage_options.hypotheses_path, "Hypotheses JSONL")
        ->required();
    triage_cmd->add_option("--t-best", triage_options.t_best, "Current best runtime (s)")
        ->required();
    triage_cmd->add_option("--t-sol", triage_options.t_sol, "SOL bound (s)")->required();
    triage_cmd->add_flag("--csv", triage_options.csv, "CSV output instead of JSONL");

    ReplayOptions replay_options;
    double replay_epsilon = 0.0;
    CLI::App* replay_cmd = app.add_subcommand("replay", "Replay run logs under one policy");
    replay_cmd->add_option("logs", replay_options.logs_path, "Run log file or directory")
        ->required();
    CLI::Option* eps_opt =
        replay_cmd->add_option("--epsilon", replay_epsilon, "SOL-gap stop threshold");
    replay_cmd->add_option("--window", replay_options.window, "No-progress window (0 disables)");
    replay_cmd->add_flag("--csv", replay_options.csv, "Per-problem CSV instead of summary");

    SweepOptions sweep_options;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep an (epsilon, window) policy grid");
    sweep_cmd->add_option("logs", sweep_options.logs_path, "Run log file or directory")
        ->required();
    sweep_cmd->add_option("--epsilons", sweep_options.epsilons,
                          "Comma list (numbers or 'disabled')");
    sweep_cmd->add_option("--windows", sweep_options.windows, "Comma list of window sizes");
    sweep_cmd->add_option("--min-retention", sweep_options.min_retention,
                          "Retention floor for best-policy selection");
    sweep_cmd->add_option("--pricing", sweep_options.pricing_path, "Pricing config JSON");
    sweep_cmd->add_option("--model", sweep_options.model, "Model name for dollar costs");
    sweep_cmd->add_option("--out", sweep_options.out_dir, "Directory for sweep/pareto CSVs");
    sweep_cmd->add_option("--plot", sweep_options.plot_path, "Write a Pareto SVG chart");

    MetricsOptions metrics_options;
    CLI::App* metrics_cmd = app.add_subcommand("metrics", "Speedup summaries and Fast-p curves");
    metrics_cmd->add_option("--speedups", metrics_options.speedups_path,
                            "Speedup table CSV (problem_id,t_ref,t_best; or "
                            "problem_id,speedup as written by review --filtered)")
        ->required();
    metrics_cmd->add_option("--baseline", metrics_options.baseline_path,
                            "Baseline speedup table for signed area");
    metrics_cmd->add_option("--convention", metrics_options.convention,
                            "Unsolved convention (fallback_one|zero)");
    metrics_cmd->add_option("--thresholds", metrics_options.thresholds,
                            "Comma list of Fast-p thresholds");
    metrics_cmd->add_option("--curve", metrics_options.curve_path, "Write Fast-p curve CSV");
    metrics_cmd->add_option("--plot", metrics_options.plot_path, "Write Fast-p SVG chart");
    metrics_cmd->add_option("--logs", metrics_options.logs_path,
                            "Run logs for Attempt-Fast-p");
    metrics_cmd->add_option("--attempt-target", metrics_options.attempt_target,
                            "Attempt-Fast-p speedup target r");
    metrics_cmd->add_option("--attempt-curve", metrics_options.attempt_curve_path,
                            "Write Attempt-Fast-p CSV (stdout when omitted)");
    metrics_cmd->add_option("--attempt-plot", metrics_options.attempt_plot_path,
                            "Write Attempt-Fast-p SVG chart");

    ReviewOptions review_options;
    CLI::App* review_cmd = app.add_subcommand("review", "Integrity detectors and label merge");
    review_cmd->add_option("--logs", review_options.logs_path, "Run log file or directory")
        ->required();
    review_cmd->add_option("--labels", review_options.labels_path, "Reviewer labels JSONL");
    review_cmd->add_option("--profiles", review_options.profiles_dir,
                           "Directory of NCU profiles named <problem_id>__<index>.txt");
    review_cmd->add_option("--patterns", review_options.patterns_path, "Patterns config JSON");
    review_cmd->add_option("--filtered", review_options.filtered_path,
                           "Write filtered speedup set CSV");
    review_cmd->add_option("--convention", review_options.convention,
                           "Unsolved convention (fallback_one|zero)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error[Usage]: " << e.what() << "\n";
        return 2;
    }

    try {
        if (compile_cmd->parsed()) return run_compile(compile_options);
        if (sol_cmd->parsed()) return run_sol(sol_options);
        if (triage_cmd->parsed()) return run_triage(triage_options);
        if (replay_cmd->parsed()) {
            if (eps_opt->count() > 0) replay_options.epsilon = replay_epsilon;
            return run_replay(replay_options);
        }
        if (sweep_cmd->parsed()) return run_sweep(sweep_options);
        if (metrics_cmd->parsed()) return run_metrics(metrics_options);
        if (review_cmd->parsed()) return run_review(review_options);
    } catch (const Error& e) {
        std::cerr << "error[" << error_kind(e) << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error[Internal]: " << e.what() << "\n";
        return 1;
    }
    return 2;  // unreachable with require_subcommand(1)
}
