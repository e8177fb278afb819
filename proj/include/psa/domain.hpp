#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

namespace psa {

/// Continuous interval [lower, upper].
struct ContinuousDomain {
    double lower;
    double upper;
};

/// Discrete grid {m * step : min_multiple <= m <= max_multiple}, step > 0.
struct GridDomain {
    double step;
    long min_multiple;
    long max_multiple;

    double lower() const { return static_cast<double>(min_multiple) * step; }
    double upper() const { return static_cast<double>(max_multiple) * step; }
};

using VariableDomain = std::variant<ContinuousDomain, GridDomain>;

inline VariableDomain continuous(double lower, double upper) {
    if (lower > upper) throw std::invalid_argument("continuous domain: lower > upper");
    return ContinuousDomain{lower, upper};
}

inline VariableDomain grid(double step, long min_multiple, long max_multiple) {
    if (step <= 0.0) throw std::invalid_argument("grid domain: step must be positive");
    if (min_multiple > max_multiple)
        throw std::invalid_argument("grid domain: min_multiple > max_multiple");
    return GridDomain{step, min_multiple, max_multiple};
}

inline double domain_lower(const VariableDomain& d) {
    if (const auto* c = std::get_if<ContinuousDomain>(&d)) return c->lower;
    return std::get<GridDomain>(d).lower();
}

inline double domain_upper(const VariableDomain& d) {
    if (const auto* c = std::get_if<ContinuousDomain>(&d)) return c->upper;
    return std::get<GridDomain>(d).upper();
}

}  // namespace psa
