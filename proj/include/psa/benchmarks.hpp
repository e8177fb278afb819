#pragma once

#include <cmath>
#include <numbers>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "psa/problem.hpp"

namespace psa {

/// Pressure vessel design problem: two grid thicknesses (multiples of
/// 0.0625 in) and two continuous dimensions, four inequality constraints.
inline Problem pressure_vessel() {
    Problem p;
    p.name = "pressure_vessel";
    p.dimension = 4;
    p.objective = [](std::span<const double> x) {
        return 0.6224 * x[0] * x[2] * x[3] + 1.7781 * x[1] * x[2] * x[2] +
               3.1661 * x[0] * x[0] * x[3] + 19.84 * x[0] * x[0] * x[2];
    };
    p.constraints = {
        [](std::span<const double> x) { return -x[0] + 0.0193 * x[2]; },
        [](std::span<const double> x) { return -x[1] + 0.00954 * x[2]; },
        [](std::span<const double> x) {
            const double pi = std::numbers::pi;
            return -pi * x[2] * x[2] * x[3] - (4.0 / 3.0) * pi * x[2] * x[2] * x[2] +
                   1296000.0;
        },
        [](std::span<const double> x) { return x[3] - 240.0; },
    };
    p.domains = {grid(0.0625, 1, 99), grid(0.0625, 1, 99), continuous(10.0, 200.0),
                 continuous(10.0, 200.0)};
    return p;
}

namespace detail {
inline double himmelblau_g1(std::span<const double> x) {
    return 85.334407 + 0.0056858 * x[1] * x[4] + 0.00026 * x[0] * x[3] -
           0.0022053 * x[2] * x[4];
}
inline double himmelblau_g2(std::span<const double> x) {
    return 80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] +
           0.0021813 * x[2] * x[2];
}
inline double himmelblau_g3(std::span<const double> x) {
    return 9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] +
           0.0019085 * x[2] * x[3];
}
}  // namespace detail

/// Himmelblau's nonlinear optimization problem: five continuous variables,
/// three double-sided constraints split into six single-sided ones.
inline Problem himmelblau() {
    Problem p;
    p.name = "himmelblau";
    p.dimension = 5;
    p.objective = [](std::span<const double> x) {
        return 5.3578547 * x[2] * x[2] + 0.8356891 * x[0] * x[4] + 37.29329 * x[0] -
               40792.141;
    };
    auto [g1_lo, g1_hi] = split_double_sided(detail::himmelblau_g1, 0.0, 92.0);
    auto [g2_lo, g2_hi] = split_double_sided(detail::himmelblau_g2, 90.0, 110.0);
    auto [g3_lo, g3_hi] = split_double_sided(detail::himmelblau_g3, 20.0, 25.0);
    p.constraints = {g1_lo, g1_hi, g2_lo, g2_hi, g3_lo, g3_hi};
    p.domains = {continuous(78.0, 102.0), continuous(33.0, 45.0), continuous(27.0, 45.0),
                 continuous(27.0, 45.0), continuous(27.0, 45.0)};
    return p;
}

/// One published result row, stored verbatim: the printed decision vector,
/// constraint-column values, objective value, and dagger marks.
struct ReferenceRow {
    std::string source;                  // citation key, or "PSA"
    std::vector<double> x;
    std::vector<double> reported_g;      // one entry per printed g column
    double reported_f = 0.0;
    std::set<int> flagged_violations;    // printed-column indices carrying a dagger

    // Problem-constraint indices behind each printed column (identical for all
    // rows of a table; a double-sided column maps to its two split parts).
    std::vector<std::vector<int>> column_constraints;
};

inline std::vector<ReferenceRow> reference_rows(const std::string& problem_name) {
    if (problem_name == "pressure_vessel") {
        const std::vector<std::vector<int>> cols{{0}, {1}, {2}, {3}};
        std::vector<ReferenceRow> rows{
            {"csaam", {0.8125, 0.4375, 42.0984, 176.6366}, {8.00e-11, -0.0359, -2.724e-4, -63.3634}, 6059.7143, {0}, cols},
            {"fastf", {0.7782, 0.3846, 40.3196, 200.000}, {-3.172e-5, 4.8984e-5, 1.3312, -40.0}, 5885.33, {1, 2}, cols},
            {"aipso", {0.8125, 0.4375, 42.0984, 176.6366}, {8.00e-11, -0.0359, -2.724e-4, -63.3634}, 6059.7143, {0}, cols},
            {"anmha", {1.125, 0.625, 58.2789, 43.7549}, {-0.0002, -0.06902, -3.71629, -196.245}, 7198.433, {}, cols},
            {"niadp", {1.125, 0.625, 48.97, 106.72}, {-0.1799, -0.1578, 97.760, -132.28}, 7980.894, {}, cols},
            {"gafnm", {1.125, 0.625, 58.1978, 44.2930}, {-0.00178, -0.06979, -974.3, -195.707}, 7207.494, {}, cols},
            {"uoasa", {0.8125, 0.4375, 40.3239, 200.0000}, {-0.034324, -0.05285, -27.10585, -40.0000}, 6288.7445, {}, cols},
            {"genas", {0.9375, 0.5000, 48.3290, 112.6790}, {-0.0048, -0.0389, -3652.877, -127.3210}, 6410.3811, {}, cols},
            {"aalmb", {1.125, 0.625, 58.291, 43.690}, {0.000016, -0.0689, -21.2201, -196.3100}, 7198.0428, {}, cols},
            {"asbsm", {0.8125, 0.4375, 41.9768, 182.2845}, {-0.0023, -0.0370, -22888.07, -57.7155}, 6171.000, {}, cols},
            {"gofsd", {1.000, 0.625, 51.000, 91.000}, {-0.0157, -0.1385, -3233.916, -149.0}, 7079.037, {}, cols},
            {"hagaw", {0.8125, 0.4375, 42.0870, 176.7791}, {-2.210e-4, -0.03599, -3.51084, -63.2208}, 6061.1229, {}, cols},
            {"agafn", {1.0, 0.625, 51.2519, 90.9913}, {-1.011, -0.136, -18759.75, -149.009}, 7172.300, {}, cols},
            {"aiaco", {0.8125, 0.4375, 42.0984, 176.6378}, {-8.8000e-7, -0.0359, -3.5586, -63.3622}, 6059.7258, {}, cols},
            {"PSA", {0.8125, 0.4375, 42.0952, 176.8095}, {-6.2625e-5, -0.0359, -738.7348, -63.1905}, 6063.2118, {}, cols},
        };
        return rows;
    }
    if (problem_name == "himmelblau") {
        const std::vector<std::vector<int>> cols{{0, 1}, {2, 3}, {4, 5}};
        std::vector<ReferenceRow> rows{
            {"couc", {78.0, 33.0, 27.07997, 45.0, 44.9692}, {92.0000, 100.4048, 20.0000}, -31025.5602, {}, cols},
            {"covga", {78.00, 33.00, 29.995, 45.00, 36.776}, {90.7147, 98.8405, 19.9999}, -30665.6088, {2}, cols},
            {"gaaed", {81.4900, 34.0900, 31.2400, 42.2000, 34.3700}, {90.5225, 99.3188, 20.0604}, -30183.576, {}, cols},
            {"anlp", {78.6200, 33.4400, 31.0700, 44.1800, 35.2200}, {90.5208, 98.8929, 20.1316}, -30373.949, {}, cols},
            {"mveob", {78.00, 33.00, 29.995256, 45.00, 36.775813}, {92.0, 98.8405, 20.0}, -30665.54, {}, cols},
            {"PSA", {79.9377, 33.8881, 28.5029, 41.3052, 41.7704}, {91.6157, 100.4943, 20.0055}, -30667.8113, {}, cols},
        };
        return rows;
    }
    throw std::invalid_argument("reference_rows: unknown problem '" + problem_name + "'");
}

/// Printed-column layout of a comparison table: how to evaluate each g column
/// at a point and decide its dagger, independent of the split encoding.
struct TableSchema {
    std::vector<std::string> column_names;
    std::vector<std::vector<int>> column_constraints;
    std::function<std::vector<double>(std::span<const double>)> column_values;
    std::function<std::vector<bool>(std::span<const double>)> column_violated;
};

inline TableSchema table_schema(const std::string& problem_name) {
    if (problem_name == "pressure_vessel") {
        TableSchema s;
        s.column_names = {"g1", "g2", "g3", "g4"};
        s.column_constraints = {{0}, {1}, {2}, {3}};
        Problem p = pressure_vessel();
        s.column_values = [p](std::span<const double> x) {
            std::vector<double> v;
            for (const auto& g : p.constraints) v.push_back(g(x));
            return v;
        };
        s.column_violated = [p](std::span<const double> x) {
            std::vector<bool> v;
            for (const auto& g : p.constraints) v.push_back(g(x) > 0.0);
            return v;
        };
        return s;
    }
    if (problem_name == "himmelblau") {
        TableSchema s;
        s.column_names = {"g1", "g2", "g3"};
        s.column_constraints = {{0, 1}, {2, 3}, {4, 5}};
        s.column_values = [](std::span<const double> x) {
            return std::vector<double>{detail::himmelblau_g1(x), detail::himmelblau_g2(x),
                                       detail::himmelblau_g3(x)};
        };
        const std::vector<std::pair<double, double>> bounds{{0.0, 92.0}, {90.0, 110.0}, {20.0, 25.0}};
        s.column_violated = [bounds](std::span<const double> x) {
            const std::vector<double> v{detail::himmelblau_g1(x), detail::himmelblau_g2(x),
                                        detail::himmelblau_g3(x)};
            std::vector<bool> out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out.push_back(v[i] < bounds[i].first || v[i] > bounds[i].second);
            return out;
        };
        return s;
    }
    throw std::invalid_argument("table_schema: unknown problem '" + problem_name + "'");
}

/// Outcome of recomputing one published row. Mismatches are data, not errors.
struct AuditVerdict {
    double f_recomputed = 0.0;
    double f_error = 0.0;        // |recomputed - reported|
    bool f_within = false;

    std::vector<double> g_recomputed;     // per problem constraint
    std::vector<bool> violated;           // strict g > 0
    std::vector<double> sign_tolerance;   // per problem constraint

    std::vector<bool> column_flag_match;  // per printed column
    bool flags_match = false;

    bool ok() const { return f_within && flags_match; }
};

/// Half-width of the rounding interval of a value printed with four decimals.
inline constexpr double kPrintedXHalfUlp = 5e-5;

/// Recompute a published row from its printed x. The printed x carries four
/// decimals, so each recomputed g_j gets a sign tolerance of
/// sign_tol + sum_i |dg_j/dx_i| * 5e-5: a dagger is confirmed when the
/// recomputed value exceeds -that, an unflagged entry when it stays below it.
inline AuditVerdict audit_row(const Problem& problem, const ReferenceRow& row,
                              double f_tolerance = 1.0, double sign_tolerance = 1e-3) {
    if (static_cast<int>(row.x.size()) != problem.dimension)
        throw std::invalid_argument("audit_row: dimension mismatch");

    AuditVerdict v;
    v.f_recomputed = problem.objective(row.x);
    v.f_error = std::abs(v.f_recomputed - row.reported_f);
    v.f_within = v.f_error <= f_tolerance;

    const std::size_t m = problem.constraints.size();
    std::vector<double> xp(row.x.begin(), row.x.end());
    for (std::size_t j = 0; j < m; ++j) {
        const double g = problem.constraints[j](row.x);
        v.g_recomputed.push_back(g);
        v.violated.push_back(g > 0.0);
        double tol = sign_tolerance;
        for (std::size_t i = 0; i < xp.size(); ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(xp[i]));
            const double orig = xp[i];
            xp[i] = orig + h;
            const double gp = problem.constraints[j](xp);
            xp[i] = orig - h;
            const double gm = problem.constraints[j](xp);
            xp[i] = orig;
            tol += std::abs((gp - gm) / (2.0 * h)) * kPrintedXHalfUlp;
        }
        v.sign_tolerance.push_back(tol);
    }

    v.flags_match = true;
    for (std::size_t c = 0; c < row.column_constraints.size(); ++c) {
        const bool flagged = row.flagged_violations.count(static_cast<int>(c)) > 0;
        bool match;
        if (flagged) {
            // At least one side of the column must plausibly be positive.
            match = false;
            for (int j : row.column_constraints[c])
                if (v.g_recomputed[j] > -v.sign_tolerance[j]) match = true;
        } else {
            match = true;
            for (int j : row.column_constraints[c])
                if (v.g_recomputed[j] > v.sign_tolerance[j]) match = false;
        }
        v.column_flag_match.push_back(match);
        v.flags_match = v.flags_match && match;
    }
    return v;
}

}  // namespace psa
