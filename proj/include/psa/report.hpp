#pragma once

#include <charconv>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psa/batch.hpp"
#include "psa/benchmarks.hpp"
#include "psa/solver.hpp"

namespace psa {

enum class OutputFormat { Text, Csv, Json };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "text") return OutputFormat::Text;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown format '" + s + "' (expected text, csv, or json)");
}

/// Shortest decimal string that round-trips to the same double.
inline std::string num(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

inline std::string fixed(double v, int decimals) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << v;
    return os.str();
}

namespace detail_report {

struct TableRow {
    std::string source;
    std::vector<double> x;
    std::vector<double> g;
    double f = 0.0;
    std::vector<bool> flagged;  // per g column
};

inline std::string render_rows(const std::string& problem_name,
                               const std::vector<std::string>& g_names,
                               const std::vector<TableRow>& rows, OutputFormat format) {
    if (format == OutputFormat::Json) {
        nlohmann::json out;
        out["problem"] = problem_name;
        out["rows"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json jr;
            jr["source"] = r.source;
            jr["x"] = r.x;
            jr["g"] = r.g;
            jr["f"] = r.f;
            std::vector<int> flags;
            for (std::size_t c = 0; c < r.flagged.size(); ++c)
                if (r.flagged[c]) flags.push_back(static_cast<int>(c) + 1);
            jr["violated_columns"] = flags;
            out["rows"].push_back(std::move(jr));
        }
        return out.dump(2) + "\n";
    }

    const std::size_t d = rows.empty() ? 0 : rows.front().x.size();
    if (format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "source";
        for (std::size_t i = 1; i <= d; ++i) os << ",x" << i;
        for (const auto& n : g_names) os << "," << n;
        os << ",f,flags\n";
        for (const auto& r : rows) {
            os << r.source;
            for (double v : r.x) os << "," << num(v);
            for (double v : r.g) os << "," << num(v);
            os << "," << num(r.f) << ",";
            bool first = true;
            for (std::size_t c = 0; c < r.flagged.size(); ++c) {
                if (!r.flagged[c]) continue;
                if (!first) os << ";";
                os << (c + 1);
                first = false;
            }
            os << "\n";
        }
        return os.str();
    }

    // Aligned text.
    std::vector<std::string> headers{"source"};
    for (std::size_t i = 1; i <= d; ++i) headers.push_back("x" + std::to_string(i));
    for (const auto& n : g_names) headers.push_back(n);
    headers.push_back("f");
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        std::vector<std::string> line{r.source};
        for (double v : r.x) line.push_back(fixed(v, 4));
        for (std::size_t c = 0; c < r.g.size(); ++c)
            line.push_back(num(r.g[c]) + (r.flagged[c] ? "†" : ""));
        line.push_back(fixed(r.f, 4));
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        widths[c] = headers[c].size();
        for (const auto& line : cells) widths[c] = std::max(widths[c], line[c].size());
    }
    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& line) {
        for (std::size_t c = 0; c < line.size(); ++c)
            os << std::left << std::setw(static_cast<int>(widths[c]) + 2) << line[c];
        os << "\n";
    };
    emit(headers);
    for (const auto& line : cells) emit(line);
    return os.str();
}

}  // namespace detail_report

/// Single-run report: x*, f*, per-column g values with violation flags.
inline std::string format_run_report(const Problem& problem, const RunResult& result,
                                     OutputFormat format) {
    std::vector<std::string> g_names;
    std::vector<double> g_values;
    std::vector<bool> g_flags;
    try {
        TableSchema schema = table_schema(problem.name);
        g_names = schema.column_names;
        g_values = schema.column_values(result.best_x);
        g_flags = schema.column_violated(result.best_x);
    } catch (const std::invalid_argument&) {
        for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
            g_names.push_back("g" + std::to_string(j + 1));
            g_values.push_back(result.constraint_report.values[j]);
            g_flags.push_back(result.constraint_report.violated[j]);
        }
    }

    if (format == OutputFormat::Json) {
        nlohmann::json out;
        out["problem"] = problem.name;
        out["best_x"] = result.best_x;
        out["best_f"] = result.best_f;
        out["g"] = g_values;
        std::vector<int> flags;
        for (std::size_t c = 0; c < g_flags.size(); ++c)
            if (g_flags[c]) flags.push_back(static_cast<int>(c) + 1);
        out["violated_columns"] = flags;
        out["feasible"] = result.constraint_report.feasible;
        out["steps_taken"] = result.steps_taken;
        return out.dump(2) + "\n";
    }
    detail_report::TableRow row{"PSA", result.best_x, g_values, result.best_f, g_flags};
    std::string table =
        detail_report::render_rows(problem.name, g_names, {row}, format);
    if (format == OutputFormat::Text) {
        table += result.constraint_report.feasible ? "feasible: yes\n" : "feasible: no\n";
        table += "steps: " + std::to_string(result.steps_taken) + "\n";
    }
    return table;
}

/// Reference rows plus (optionally) a freshly computed PSA row, with daggers
/// decided by recomputation at each row's printed x.
inline std::string render_comparison(const std::string& problem_name,
                                     const RunResult* ours, OutputFormat format) {
    const TableSchema schema = table_schema(problem_name);
    const auto rows = reference_rows(problem_name);
    const Problem problem =
        problem_name == "pressure_vessel" ? pressure_vessel() : himmelblau();

    std::vector<detail_report::TableRow> out;
    for (const auto& r : rows) {
        detail_report::TableRow t{r.source, r.x, r.reported_g, r.reported_f, {}};
        for (std::size_t c = 0; c < r.reported_g.size(); ++c)
            t.flagged.push_back(r.flagged_violations.count(static_cast<int>(c)) > 0);
        out.push_back(std::move(t));
    }
    if (ours != nullptr) {
        detail_report::TableRow t;
        t.source = "PSA (this run)";
        t.x = ours->best_x;
        t.g = schema.column_values(ours->best_x);
        t.f = problem.objective(ours->best_x);
        t.flagged = schema.column_violated(ours->best_x);
        out.push_back(std::move(t));
    }
    return detail_report::render_rows(problem_name, schema.column_names, out, format);
}

/// The shipped machine-readable form of a reference table (reported values
/// verbatim; flags are 1-based printed-column indices).
inline std::string reference_table_csv(const std::string& problem_name) {
    const TableSchema schema = table_schema(problem_name);
    std::vector<detail_report::TableRow> out;
    for (const auto& r : reference_rows(problem_name)) {
        detail_report::TableRow t{r.source, r.x, r.reported_g, r.reported_f, {}};
        for (std::size_t c = 0; c < r.reported_g.size(); ++c)
            t.flagged.push_back(r.flagged_violations.count(static_cast<int>(c)) > 0);
        out.push_back(std::move(t));
    }
    return detail_report::render_rows(problem_name, schema.column_names, out,
                                      OutputFormat::Csv);
}

inline std::string format_batch_summary(const BatchSummary& s, OutputFormat format) {
    if (format == OutputFormat::Json) {
        nlohmann::json out;
        out["runs"] = s.runs;
        out["feasible_runs"] = s.feasible_runs;
        out["failed_runs"] = s.failed_runs;
        out["feasibility_rate"] = s.feasibility_rate;
        out["best_f"] = s.best_f;
        out["worst_f"] = s.worst_f;
        out["mean_f"] = s.mean_f;
        out["std_f"] = s.std_f;
        out["mean_wall_seconds"] = s.mean_wall_seconds;
        if (s.feasible_runs > 0) {
            out["best_run"]["seed"] = s.best_run.seed;
            out["best_run"]["best_x"] = s.best_run.result.best_x;
            out["best_run"]["best_f"] = s.best_run.result.best_f;
        }
        out["records"] = nlohmann::json::array();
        for (const auto& r : s.records) {
            nlohmann::json jr;
            jr["seed"] = r.seed;
            jr["feasible"] = r.feasible;
            jr["failed"] = r.failed;
            if (r.failed)
                jr["error"] = r.error;
            else
                jr["best_f"] = r.result.best_f;
            jr["wall_seconds"] = r.wall_seconds;
            out["records"].push_back(std::move(jr));
        }
        return out.dump(2) + "\n";
    }
    if (format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "seed,best_f,feasible,failed,wall_seconds\n";
        for (const auto& r : s.records)
            os << r.seed << "," << (r.failed ? "" : num(r.result.best_f)) << ","
               << (r.feasible ? 1 : 0) << "," << (r.failed ? 1 : 0) << ","
               << num(r.wall_seconds) << "\n";
        return os.str();
    }
    std::ostringstream os;
    os << "runs:             " << s.runs << "\n"
       << "feasible:         " << s.feasible_runs << " (rate " << fixed(s.feasibility_rate, 3)
       << ")\n"
       << "failed:           " << s.failed_runs << "\n";
    if (s.feasible_runs > 0) {
        os << "best f:           " << num(s.best_f) << " (seed " << s.best_run.seed << ")\n"
           << "worst f:          " << num(s.worst_f) << "\n"
           << "mean f:           " << num(s.mean_f) << "\n"
           << "std f:            " << num(s.std_f) << "\n"
           << "best x:           ";
        for (std::size_t i = 0; i < s.best_run.result.best_x.size(); ++i)
            os << (i ? ", " : "") << num(s.best_run.result.best_x[i]);
        os << "\n";
    }
    os << "mean wall time:   " << fixed(s.mean_wall_seconds, 3) << " s/run\n";
    return os.str();
}

}  // namespace psa
