#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "psa/problem.hpp"
#include "psa/projection.hpp"

namespace psa {

struct SolverConfig {
    int swarm_size = 40;         // N
    double lambda = 0.6;         // aggregation/exploration weight, in (0,1)
    long max_steps = 100000;
    double tau_std = 0.1;        // std of the zero-mean Gaussian detection direction
    double gamma = 1e12;         // penalty parameter
    std::uint64_t seed = 0;

    void validate() const {
        if (swarm_size < 2) throw std::invalid_argument("swarm_size must be >= 2");
        if (!(lambda > 0.0 && lambda < 1.0))
            throw std::invalid_argument("lambda must lie in (0,1)");
        if (max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
        if (!(tau_std > 0.0)) throw std::invalid_argument("tau_std must be positive");
    }
};

struct SwarmState {
    std::vector<std::vector<double>> positions;
    std::vector<double> costs;   // penalized cost of each position
    long step = 0;
    std::vector<double> best_x;
    double best_f = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng;
};

struct RunResult {
    std::vector<double> best_x;
    double best_f = std::numeric_limits<double>::infinity();
    ConstraintReport constraint_report;
    long steps_taken = 0;
    std::vector<std::pair<long, double>> history;  // (step, best_f), when recorded
};

/// Per-step trace record: (step, best_f, number of positions with all g_j <= 0).
using TraceSink = std::function<void(long, double, int)>;

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform initial positions: continuous coordinates in [l, u], grid
/// coordinates uniform over the full admissible multiples.
inline std::vector<std::vector<double>> init_positions(
    std::span<const VariableDomain> domains, int n, std::mt19937_64& rng) {
    if (n < 2) throw std::invalid_argument("init_positions: need at least 2 positions");
    std::vector<std::vector<double>> positions(n, std::vector<double>(domains.size()));
    for (auto& x : positions) {
        for (std::size_t j = 0; j < domains.size(); ++j) {
            if (const auto* c = std::get_if<ContinuousDomain>(&domains[j])) {
                std::uniform_real_distribution<double> u(c->lower, c->upper);
                x[j] = u(rng);
            } else {
                const auto& g = std::get<GridDomain>(domains[j]);
                std::uniform_int_distribution<long> u(g.min_multiple, g.max_multiple);
                x[j] = static_cast<double>(u(rng)) * g.step;
            }
        }
    }
    return positions;
}

/// Normalized rank of a detected cost within the swarm, in [0,1].
/// The minimizer gets 0, the maximizer 1; a flat swarm gets 0 everywhere.
inline double exploration_weight(std::span<const double> detected, std::size_t i) {
    if (detected.size() < 2) throw std::invalid_argument("exploration_weight: need N >= 2");
    if (i >= detected.size()) throw std::invalid_argument("exploration_weight: bad index");
    const auto [mn, mx] = std::minmax_element(detected.begin(), detected.end());
    if (*mx == *mn) return 0.0;
    return (detected[i] - *mn) / (*mx - *mn);
}

namespace detail {

inline double guarded_cost(const Problem& problem, std::span<const double> x,
                           const PenaltyParams& params, long step, int individual) {
    try {
        return penalized_cost(problem, x, params);
    } catch (const EvalError& e) {
        throw SolverError("evaluation failed for individual " +
                          std::to_string(individual) + " at step " +
                          std::to_string(step) + ": " + e.what());
    }
}

inline bool all_constraints_satisfied(const Problem& problem,
                                      std::span<const double> x) {
    for (const auto& g : problem.constraints)
        if (g(x) > 0.0) return false;
    return true;
}

}  // namespace detail

inline SwarmState init_state(const Problem& problem, const SolverConfig& config) {
    config.validate();
    SwarmState state;
    state.rng.seed(config.seed);
    state.positions = init_positions(std::span(problem.domains), config.swarm_size, state.rng);
    const PenaltyParams params{config.gamma};
    state.costs.resize(state.positions.size());
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        state.costs[i] = detail::guarded_cost(problem, state.positions[i], params, 0,
                                              static_cast<int>(i));
        if (state.costs[i] < state.best_f) {
            state.best_f = state.costs[i];
            state.best_x = state.positions[i];
        }
    }
    return state;
}

/// One swarm update with an injected detection direction tau (|tau| = d):
/// detect at x_i + tau, rank into p_i, move each individual toward the swarm
/// best plus the -lambda*p*tau exploration term, project, re-evaluate, and
/// update the best-so-far pair.
inline void step_with_direction(SwarmState& state, const Problem& problem,
                                const SolverConfig& config,
                                std::span<const double> tau) {
    const std::size_t n = state.positions.size();
    const std::size_t d = problem.domains.size();
    if (tau.size() != d) throw std::invalid_argument("step: tau dimension mismatch");

    const PenaltyParams params{config.gamma};
    const long k = state.step;

    // Detection probes are evaluated where they land, without projection.
    std::vector<double> detected(n);
    std::vector<double> probe(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) probe[j] = state.positions[i][j] + tau[j];
        detected[i] = detail::guarded_cost(problem, probe, params, k, static_cast<int>(i));
    }

    const std::size_t b =
        std::min_element(state.costs.begin(), state.costs.end()) - state.costs.begin();
    const std::vector<double> swarm_best = state.positions[b];

    std::vector<double> moved(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = exploration_weight(detected, i);
        for (std::size_t j = 0; j < d; ++j) {
            moved[j] = state.positions[i][j] -
                       (1.0 - config.lambda) * (state.positions[i][j] - swarm_best[j]) -
                       config.lambda * p * tau[j];
        }
        state.positions[i] = project_domain(std::span(problem.domains), moved);
        state.costs[i] = detail::guarded_cost(problem, state.positions[i], params, k,
                                              static_cast<int>(i));
        if (state.costs[i] < state.best_f) {
            state.best_f = state.costs[i];
            state.best_x = state.positions[i];
        }
    }
    ++state.step;
}

/// One swarm update; tau is drawn once per step and shared by all individuals.
inline void step(SwarmState& state, const Problem& problem, const SolverConfig& config) {
    std::normal_distribution<double> normal(0.0, config.tau_std);
    std::vector<double> tau(problem.domains.size());
    for (auto& t : tau) t = normal(state.rng);
    step_with_direction(state, problem, config, tau);
}

struct SolveOptions {
    TraceSink trace;              // called once per step when set
    bool record_history = false;  // keep (step, best_f) pairs in the result
};

inline RunResult solve(const Problem& problem, const SolverConfig& config,
                       const SolveOptions& options = {}) {
    SwarmState state = init_state(problem, config);
    RunResult result;
    if (options.record_history) result.history.emplace_back(0, state.best_f);
    for (long k = 0; k < config.max_steps; ++k) {
        step(state, problem, config);
        if (options.record_history) result.history.emplace_back(state.step, state.best_f);
        if (options.trace) {
            int feasible = 0;
            for (const auto& x : state.positions)
                if (detail::all_constraints_satisfied(problem, x)) ++feasible;
            options.trace(state.step, state.best_f, feasible);
        }
    }
    result.best_x = state.best_x;
    result.best_f = state.best_f;
    result.steps_taken = state.step;
    result.constraint_report = evaluate_constraints(problem, result.best_x);
    return result;
}

}  // namespace psa
