#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "psa/batch.hpp"
#include "psa/benchmarks.hpp"
#include "psa/dsl.hpp"
#include "psa/report.hpp"
#include "psa/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitEvalFailure = 2;
constexpr int kExitAuditMismatch = 3;

psa::Problem resolve_problem(const std::string& source) {
    if (source == "pressure_vessel") return psa::pressure_vessel();
    if (source == "himmelblau") return psa::himmelblau();
    if (std::filesystem::exists(source)) {
        std::ifstream in(source);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            return psa::dsl::compile(buf.str());
        } catch (const psa::dsl::ParseError& e) {
            throw std::invalid_argument(source + ": " + e.what());
        }
    }
    throw std::invalid_argument("unknown problem '" + source +
                                "' (expected pressure_vessel, himmelblau, or a .cop file)");
}

struct CommonOptions {
    std::string problem;
    std::optional<std::uint64_t> seed;
    int swarm = 40;
    double lambda = 0.6;
    long max_steps = 5000;
    double gamma = 1e12;
    double tau_std = 0.1;
    std::string format = "text";
    std::string out_path;
    std::string trace_path;

    psa::SolverConfig config() const {
        psa::SolverConfig c;
        c.swarm_size = swarm;
        c.lambda = lambda;
        c.max_steps = max_steps;
        c.gamma = gamma;
        c.tau_std = tau_std;
        if (seed) {
            c.seed = *seed;
        } else if (const char* env = std::getenv("PSA_DEFAULT_SEED")) {
            c.seed = std::stoull(env);
        } else {
            c.seed = 0;
        }
        return c;
    }
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_problem = true) {
    auto* p = cmd->add_option("--problem", opts.problem,
                              "Builtin problem name or path to a .cop file");
    if (needs_problem) p->required();
    cmd->add_option("--seed", opts.seed, "RNG seed (default: $PSA_DEFAULT_SEED or 0)");
    cmd->add_option("--swarm", opts.swarm, "Swarm size N")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", opts.lambda, "Aggregation/exploration weight in (0,1)");
    cmd->add_option("--max-steps", opts.max_steps, "Number of swarm updates");
    cmd->add_option("--gamma", opts.gamma, "Penalty parameter");
    cmd->add_option("--tau-std", opts.tau_std, "Std of the detection direction");
    cmd->add_option("--format", opts.format, "Output format: text, csv, or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    cmd->add_option("--out", opts.out_path, "Write the report to this file");
    cmd->add_option("--trace", opts.trace_path, "Write a per-step CSV trace to this file");
}

void emit(const CommonOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.out_path);
        if (!out) throw std::invalid_argument("cannot open output file " + opts.out_path);
        out << text;
    }
}

int cmd_solve(const CommonOptions& opts) {
    const psa::Problem problem = resolve_problem(opts.problem);
    psa::SolveOptions solve_opts;
    std::ofstream trace;
    if (!opts.trace_path.empty()) {
        trace.open(opts.trace_path);
        if (!trace) throw std::invalid_argument("cannot open trace file " + opts.trace_path);
        trace << "step,best_f,feasible_count\n";
        solve_opts.trace = [&trace](long k, double best_f, int feasible) {
            trace << k << "," << psa::num(best_f) << "," << feasible << "\n";
        };
    }
    const psa::RunResult result = psa::solve(problem, opts.config(), solve_opts);
    emit(opts, psa::format_run_report(problem, result, psa::parse_format(opts.format)));
    return kExitOk;
}

int cmd_bench(const CommonOptions& opts, int runs, unsigned threads) {
    const psa::Problem problem = resolve_problem(opts.problem);
    const psa::BatchSummary summary =
        psa::run_batch(problem, runs, opts.config().seed, opts.config(), threads);
    emit(opts, psa::format_batch_summary(summary, psa::parse_format(opts.format)));
    return kExitOk;
}

int cmd_audit(const CommonOptions& opts, bool strict, double f_tol) {
    const psa::Problem problem = resolve_problem(opts.problem);
    const auto rows = psa::reference_rows(problem.name);
    const psa::OutputFormat format = psa::parse_format(opts.format);

    bool all_ok = true;
    std::ostringstream os;
    nlohmann::json jrows = nlohmann::json::array();
    if (format == psa::OutputFormat::Csv)
        os << "source,f_reported,f_recomputed,f_error,f_within,flags_match\n";
    for (const auto& row : rows) {
        const psa::AuditVerdict v = psa::audit_row(problem, row, f_tol);
        all_ok = all_ok && v.ok();
        switch (format) {
            case psa::OutputFormat::Text: {
                os << (v.ok() ? "[ ok ] " : "[FAIL] ") << row.source << ": f reported "
                   << psa::num(row.reported_f) << ", recomputed " << psa::num(v.f_recomputed)
                   << " (|err| " << psa::num(v.f_error) << (v.f_within ? "" : " > tol") << ")";
                if (!v.flags_match) {
                    os << "; flag mismatch in column(s)";
                    for (std::size_t c = 0; c < v.column_flag_match.size(); ++c)
                        if (!v.column_flag_match[c]) os << " " << (c + 1);
                }
                os << "\n";
                break;
            }
            case psa::OutputFormat::Csv:
                os << row.source << "," << psa::num(row.reported_f) << ","
                   << psa::num(v.f_recomputed) << "," << psa::num(v.f_error) << ","
                   << (v.f_within ? 1 : 0) << "," << (v.flags_match ? 1 : 0) << "\n";
                break;
            case psa::OutputFormat::Json: {
                nlohmann::json jr;
                jr["source"] = row.source;
                jr["f_reported"] = row.reported_f;
                jr["f_recomputed"] = v.f_recomputed;
                jr["f_error"] = v.f_error;
                jr["f_within"] = v.f_within;
                jr["g_recomputed"] = v.g_recomputed;
                jr["flags_match"] = v.flags_match;
                jr["ok"] = v.ok();
                jrows.push_back(std::move(jr));
                break;
            }
        }
    }
    if (format == psa::OutputFormat::Json) {
        nlohmann::json out;
        out["problem"] = problem.name;
        out["rows"] = std::move(jrows);
        out["all_ok"] = all_ok;
        os << out.dump(2) << "\n";
    } else if (format == psa::OutputFormat::Text) {
        os << (all_ok ? "all rows consistent\n" : "published-table inconsistencies found\n");
    }
    emit(opts, os.str());
    return (strict && !all_ok) ? kExitAuditMismatch : kExitOk;
}

int cmd_compare(const CommonOptions& opts, int runs, unsigned threads, bool reference_only) {
    const psa::Problem problem = resolve_problem(opts.problem);
    const psa::OutputFormat format = psa::parse_format(opts.format);
    if (reference_only) {
        emit(opts, psa::render_comparison(problem.name, nullptr, format));
        return kExitOk;
    }
    const psa::BatchSummary summary =
        psa::run_batch(problem, runs, opts.config().seed, opts.config(), threads);
    if (summary.feasible_runs == 0)
        throw psa::EvalError("no feasible run to compare; increase --runs or --max-steps");
    emit(opts, psa::render_comparison(problem.name, &summary.best_run.result, format));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Porcellio scaber algorithm for constrained optimization"};
    app.require_subcommand(1);

    CommonOptions solve_opts, bench_opts, audit_opts, compare_opts;
    int bench_runs = 30, compare_runs = 30;
    unsigned bench_threads = 0, compare_threads = 0;
    bool audit_strict = false, compare_reference_only = false;
    double audit_f_tol = 1.0;

    auto* solve = app.add_subcommand("solve", "Run a single seeded solve");
    add_common(solve, solve_opts);

    auto* bench = app.add_subcommand("bench", "Run a seeded batch campaign");
    add_common(bench, bench_opts);
    bench->add_option("--runs", bench_runs, "Number of replicas")->check(CLI::PositiveNumber);
    bench->add_option("--threads", bench_threads, "Worker threads (0 = all cores)");

    auto* audit = app.add_subcommand("audit", "Recompute every published reference row");
    add_common(audit, audit_opts);
    audit->add_flag("--strict", audit_strict, "Exit with code 3 on any mismatch");
    audit->add_option("--f-tol", audit_f_tol, "Absolute tolerance on recomputed f");

    auto* compare = app.add_subcommand("compare", "Reference table plus a fresh PSA row");
    add_common(compare, compare_opts);
    compare->add_option("--runs", compare_runs, "Replicas behind the PSA row")
        ->check(CLI::PositiveNumber);
    compare->add_option("--threads", compare_threads, "Worker threads (0 = all cores)");
    compare->add_flag("--reference-only", compare_reference_only,
                      "Print only the published rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_opts);
        if (bench->parsed()) return cmd_bench(bench_opts, bench_runs, bench_threads);
        if (audit->parsed()) return cmd_audit(audit_opts, audit_strict, audit_f_tol);
        if (compare->parsed())
            return cmd_compare(compare_opts, compare_runs, compare_threads,
                               compare_reference_only);
    } catch (const psa::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEvalFailure;
    } catch (const psa::SolverError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEvalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
