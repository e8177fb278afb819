#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "psa/solver.hpp"

namespace psa {

/// One replica of a batch campaign, keyed by its seed.
struct RunRecord {
    std::uint64_t seed = 0;
    RunResult result;
    bool feasible = false;
    bool failed = false;
    std::string error;
    double wall_seconds = 0.0;
};

struct BatchSummary {
    int runs = 0;
    int feasible_runs = 0;
    int failed_runs = 0;
    double feasibility_rate = 0.0;
    // Statistics over the final f of feasible runs only.
    double best_f = std::numeric_limits<double>::quiet_NaN();
    double worst_f = std::numeric_limits<double>::quiet_NaN();
    double mean_f = std::numeric_limits<double>::quiet_NaN();
    double std_f = std::numeric_limits<double>::quiet_NaN();
    RunRecord best_run;
    double mean_wall_seconds = 0.0;
    std::vector<RunRecord> records;  // ordered by seed
};

/// Aggregates per-seed records into a summary. Deterministic in the records'
/// seed order, independent of completion order.
inline BatchSummary summarize(std::vector<RunRecord> records) {
    BatchSummary s;
    s.runs = static_cast<int>(records.size());
    double sum = 0.0, sum_sq = 0.0, wall = 0.0;
    for (const auto& r : records) {
        wall += r.wall_seconds;
        if (r.failed) {
            ++s.failed_runs;
            continue;
        }
        if (!r.feasible) continue;
        const double f = r.result.best_f;
        if (s.feasible_runs == 0 || f < s.best_f) {
            s.best_f = f;
            s.best_run = r;
        }
        if (s.feasible_runs == 0 || f > s.worst_f) s.worst_f = f;
        sum += f;
        sum_sq += f * f;
        ++s.feasible_runs;
    }
    if (s.runs > 0) {
        s.feasibility_rate = static_cast<double>(s.feasible_runs) / s.runs;
        s.mean_wall_seconds = wall / s.runs;
    }
    if (s.feasible_runs > 0) {
        s.mean_f = sum / s.feasible_runs;
        const double var = std::max(0.0, sum_sq / s.feasible_runs - s.mean_f * s.mean_f);
        s.std_f = std::sqrt(var);
    }
    s.records = std::move(records);
    return s;
}

/// Runs `runs` independent solves with seeds base_seed .. base_seed+runs-1,
/// optionally across threads. Per-run failures become flagged records.
inline BatchSummary run_batch(const Problem& problem, int runs, std::uint64_t base_seed,
                              const SolverConfig& config, unsigned threads = 0) {
    if (runs < 1) throw std::invalid_argument("run_batch: runs must be >= 1");
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(runs));

    std::vector<RunRecord> records(runs);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < runs; i = next.fetch_add(1)) {
            RunRecord& rec = records[i];
            rec.seed = base_seed + static_cast<std::uint64_t>(i);
            SolverConfig c = config;
            c.seed = rec.seed;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                rec.result = solve(problem, c);
                rec.feasible = rec.result.constraint_report.feasible;
            } catch (const std::exception& e) {
                rec.failed = true;
                rec.error = e.what();
            }
            rec.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return summarize(std::move(records));
}

}  // namespace psa
