#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "psa/domain.hpp"

namespace psa {

/// Nearest point of the box [lower, upper] in the Euclidean norm:
/// coordinate-wise clamp.
inline std::vector<double> project_box(std::span<const double> lower,
                                       std::span<const double> upper,
                                       std::span<const double> x) {
    if (lower.size() != x.size() || upper.size() != x.size())
        throw std::invalid_argument("project_box: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::clamp(x[i], lower[i], upper[i]);
    return out;
}

/// Nearest admissible grid value: round to the nearest multiple of step
/// (half away from zero), then clamp the multiple into range.
inline double project_grid(double step, long min_multiple, long max_multiple, double x) {
    const double m = std::round(x / step);
    const double lo = static_cast<double>(min_multiple) * step;
    const double hi = static_cast<double>(max_multiple) * step;
    return std::clamp(m * step, lo, hi);
}

inline double project_coordinate(const VariableDomain& d, double x) {
    if (const auto* c = std::get_if<ContinuousDomain>(&d))
        return std::clamp(x, c->lower, c->upper);
    const auto& g = std::get<GridDomain>(d);
    return project_grid(g.step, g.min_multiple, g.max_multiple, x);
}

/// Coordinate-wise projection onto a mixed grid/box domain.
inline std::vector<double> project_domain(std::span<const VariableDomain> domains,
                                          std::span<const double> x) {
    if (domains.size() != x.size())
        throw std::invalid_argument("project_domain: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = project_coordinate(domains[i], x[i]);
    return out;
}

/// A point is admissible exactly when the projection leaves it unchanged.
inline bool domain_admissible(const VariableDomain& d, double x) {
    return project_coordinate(d, x) == x;
}

inline bool domain_admissible(std::span<const VariableDomain> domains,
                              std::span<const double> x) {
    if (domains.size() != x.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!domain_admissible(domains[i], x[i])) return false;
    return true;
}

}  // namespace psa
