#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "psa/benchmarks.hpp"
#include "psa/dsl.hpp"
#include "psa/solver.hpp"

using namespace psa;
namespace dsl = psa::dsl;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const std::string kDataDir = PSA_DATA_DIR;

}  // namespace

TEST_CASE("expression precedence and constants", "[dsl]") {
    CHECK(dsl::evaluate(*dsl::parse_expression("2 + 3*4"), {}) == 14.0);
    const std::vector<double> one{1.0};
    CHECK(dsl::evaluate(*dsl::parse_expression("-pi * x1^2"), one) ==
          -std::numbers::pi);
    CHECK(dsl::evaluate(*dsl::parse_expression("2^3^2"), {}) == 512.0);  // right-assoc
    CHECK(dsl::evaluate(*dsl::parse_expression("-2^2"), {}) == -4.0);    // ^ over unary -
    CHECK(dsl::evaluate(*dsl::parse_expression("(1+2)*3"), {}) == 9.0);
    CHECK(dsl::evaluate(*dsl::parse_expression("8/4/2"), {}) == 1.0);    // left-assoc
}

TEST_CASE("evaluation errors instead of silent non-finite values", "[dsl]") {
    CHECK_THROWS_AS(dsl::evaluate(*dsl::parse_expression("1/0"), {}), EvalError);
    CHECK_THROWS_AS(dsl::evaluate(*dsl::parse_expression("0^-1"), {}), EvalError);
    CHECK_THROWS_AS(dsl::evaluate(*dsl::parse_expression("1e308 * 1e308"), {}), EvalError);
    CHECK_THROWS_AS(dsl::evaluate(*dsl::parse_expression("x3"), std::vector<double>{1.0}),
                    EvalError);
}

TEST_CASE("parse errors carry line and column", "[dsl]") {
    try {
        dsl::parse("problem p\ndimension 2\nminimize x1 +\n");
        FAIL("expected ParseError");
    } catch (const dsl::ParseError& e) {
        CHECK(e.line == 3);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 3"));
    }
}

TEST_CASE("file-level validation", "[dsl]") {
    SECTION("missing domain declaration") {
        CHECK_THROWS_WITH(dsl::parse("dimension 3\nminimize x1\n"
                                     "x1 in [0, 1]\nx2 in [0, 1]\n"),
                          Catch::Matchers::ContainsSubstring("x3"));
    }
    SECTION("duplicate domain declaration") {
        CHECK_THROWS_WITH(dsl::parse("dimension 1\nminimize x1\n"
                                     "x1 in [0, 1]\nx1 in [0, 2]\n"),
                          Catch::Matchers::ContainsSubstring("duplicate"));
    }
    SECTION("variable beyond the declared dimension") {
        CHECK_THROWS_AS(dsl::parse("dimension 1\nminimize x2\nx1 in [0, 1]\n"),
                        dsl::ParseError);
    }
    SECTION("missing objective") {
        CHECK_THROWS_WITH(dsl::parse("dimension 1\nx1 in [0, 1]\n"),
                          Catch::Matchers::ContainsSubstring("minimize"));
    }
}

TEST_CASE("constraint clauses", "[dsl]") {
    const auto spec = dsl::parse(
        "dimension 5\n"
        "minimize x1\n"
        "x1 in [78, 102]\nx2 in [33, 45]\nx3 in [27, 45]\nx4 in [27, 45]\nx5 in [27, 45]\n"
        "x4 - 240 <= 0\n"
        "90 <= 80.51249 + 0.0071317*x2*x5 + 0.0029955*x1*x2 + 0.0021813*x3^2 <= 110\n");
    REQUIRE(spec.constraints.size() == 2);
    CHECK_FALSE(spec.constraints[0].lower.has_value());
    CHECK(spec.constraints[1].lower == 90.0);
    CHECK(spec.constraints[1].upper == 110.0);

    const Problem p = dsl::compile(spec);
    CHECK(p.constraints.size() == 3);  // double-sided clause splits in two
}

TEST_CASE("grid domain declaration", "[dsl]") {
    const auto spec = dsl::parse(
        "dimension 1\nminimize x1\nx1 in {1..99} * 0.0625\n");
    const auto& g = std::get<GridDomain>(*spec.domains[0]);
    CHECK(g.step == 0.0625);
    CHECK(g.min_multiple == 1);
    CHECK(g.max_multiple == 99);
}

TEST_CASE("print/parse round-trip", "[dsl]") {
    for (const auto* file : {"pressure_vessel.cop", "himmelblau.cop"}) {
        const auto spec = dsl::parse(read_file(kDataDir + "/" + file));
        const auto reparsed = dsl::parse(dsl::print(spec));
        CHECK(reparsed.dimension == spec.dimension);
        CHECK(dsl::equal(reparsed.objective, spec.objective));
        REQUIRE(reparsed.constraints.size() == spec.constraints.size());
        for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
            CHECK(dsl::equal(reparsed.constraints[i].expr, spec.constraints[i].expr));
            CHECK(reparsed.constraints[i].lower == spec.constraints[i].lower);
            CHECK(reparsed.constraints[i].upper == spec.constraints[i].upper);
        }
    }
    SECTION("expression printing preserves structure") {
        for (const auto* text :
             {"2 + 3*4", "-pi * x1^2", "(x1 + x2)*x3", "2^(3*x1)", "x1 - (x2 - x3)",
              "x1/(x2*x3)", "-(x1 + x2)", "2^3^2"}) {
            const auto e = dsl::parse_expression(text);
            CHECK(dsl::equal(dsl::parse_expression(dsl::print(e)), e));
        }
    }
}

TEST_CASE("compiled benchmark files match the builtin encodings", "[dsl]") {
    struct Case {
        std::string file;
        Problem builtin;
    };
    const Case cases[]{{"pressure_vessel.cop", pressure_vessel()},
                       {"himmelblau.cop", himmelblau()}};
    std::mt19937_64 rng(123);
    for (const auto& c : cases) {
        const Problem compiled = dsl::compile(read_file(kDataDir + "/" + c.file));
        REQUIRE(compiled.dimension == c.builtin.dimension);
        REQUIRE(compiled.constraints.size() == c.builtin.constraints.size());
        const auto points =
            init_positions(std::span(c.builtin.domains), 1000, rng);
        for (const auto& x : points) {
            const double fa = compiled.objective(x);
            const double fb = c.builtin.objective(x);
            REQUIRE_THAT(fa, Catch::Matchers::WithinRel(fb, 1e-9));
            for (std::size_t j = 0; j < compiled.constraints.size(); ++j) {
                const double ga = compiled.constraints[j](x);
                const double gb = c.builtin.constraints[j](x);
                if (gb == 0.0)
                    REQUIRE_THAT(ga, Catch::Matchers::WithinAbs(0.0, 1e-12));
                else
                    REQUIRE_THAT(ga, Catch::Matchers::WithinRel(gb, 1e-9));
            }
        }
    }
}

TEST_CASE("compiled problems run through the solver", "[dsl]") {
    const Problem p = dsl::compile(read_file(kDataDir + "/himmelblau.cop"));
    SolverConfig config;
    config.max_steps = 200;
    config.seed = 3;
    const RunResult r = solve(p, config);
    CHECK(r.best_x.size() == 5);
    CHECK(std::isfinite(r.best_f));
}
