#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "psa/domain.hpp"
#include "psa/projection.hpp"

namespace psa {

using Evaluable = std::function<double(std::span<const double>)>;

/// Thrown when an objective or constraint cannot be evaluated.
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Constrained problem: minimize objective(x) subject to g_j(x) <= 0 and
/// per-variable box/grid domains.
struct Problem {
    std::string name;
    int dimension = 0;
    Evaluable objective;
    std::vector<Evaluable> constraints;
    std::vector<VariableDomain> domains;

    void check_dimension(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dimension)
            throw std::invalid_argument("problem '" + name + "': expected " +
                                        std::to_string(dimension) + "-vector, got " +
                                        std::to_string(x.size()));
    }
};

struct PenaltyParams {
    double gamma = 1e12;
};

struct ConstraintReport {
    std::vector<double> values;   // g_j(x)
    std::vector<bool> violated;   // g_j(x) > 0
    bool feasible = false;        // no violations and x domain-admissible
};

/// 1 if the constraint value is positive (violated), else 0.
inline double indicator(double g_value) { return g_value > 0.0 ? 1.0 : 0.0; }

/// f(x) + gamma * sum_j g_j(x)^2 * h(g_j(x)).
/// Returns f(x) bit-for-bit when no constraint is violated.
inline double penalized_cost(const Problem& problem, std::span<const double> x,
                             const PenaltyParams& params = {}) {
    problem.check_dimension(x);
    const double f = problem.objective(x);
    double penalty = 0.0;
    bool any = false;
    for (const auto& g : problem.constraints) {
        const double v = g(x);
        if (v > 0.0) {
            penalty += v * v;
            any = true;
        }
    }
    return any ? f + params.gamma * penalty : f;
}

inline ConstraintReport evaluate_constraints(const Problem& problem,
                                             std::span<const double> x) {
    problem.check_dimension(x);
    ConstraintReport report;
    report.values.reserve(problem.constraints.size());
    report.violated.reserve(problem.constraints.size());
    bool any = false;
    for (const auto& g : problem.constraints) {
        const double v = g(x);
        report.values.push_back(v);
        report.violated.push_back(v > 0.0);
        any = any || v > 0.0;
    }
    report.feasible = !any && domain_admissible(std::span(problem.domains), x);
    return report;
}

/// Converts lower <= g(x) <= upper into the pair (lower - g(x), g(x) - upper);
/// both parts are <= 0 exactly when the double-sided constraint holds.
inline std::pair<Evaluable, Evaluable> split_double_sided(Evaluable g, double lower,
                                                          double upper) {
    if (lower > upper)
        throw std::invalid_argument("split_double_sided: lower > upper");
    Evaluable lo = [g, lower](std::span<const double> x) { return lower - g(x); };
    Evaluable hi = [g = std::move(g), upper](std::span<const double> x) {
        return g(x) - upper;
    };
    return {std::move(lo), std::move(hi)};
}

}  // namespace psa
