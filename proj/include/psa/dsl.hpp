#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "psa/problem.hpp"

namespace psa::dsl {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& message, int line_, int column_)
        : std::runtime_error("line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ": " + message),
          line(line_),
          column(column_) {}
};

// ---------------------------------------------------------------------------
// Expression AST
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Variable, Pi, Negate, Binary };
    Kind kind;
    double number = 0.0;  // Number
    int var_index = 0;    // Variable, 1-based
    char op = 0;          // Binary: + - * / ^
    ExprPtr lhs, rhs;     // Binary; Negate uses lhs only
};

inline ExprPtr make_number(double v) {
    return std::make_shared<Expr>(Expr{Expr::Kind::Number, v, 0, 0, nullptr, nullptr});
}
inline ExprPtr make_variable(int index) {
    return std::make_shared<Expr>(Expr{Expr::Kind::Variable, 0.0, index, 0, nullptr, nullptr});
}
inline ExprPtr make_pi() {
    return std::make_shared<Expr>(Expr{Expr::Kind::Pi, 0.0, 0, 0, nullptr, nullptr});
}
inline ExprPtr make_negate(ExprPtr e) {
    return std::make_shared<Expr>(Expr{Expr::Kind::Negate, 0.0, 0, 0, std::move(e), nullptr});
}
inline ExprPtr make_binary(char op, ExprPtr a, ExprPtr b) {
    return std::make_shared<Expr>(
        Expr{Expr::Kind::Binary, 0.0, 0, op, std::move(a), std::move(b)});
}

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Number: return a->number == b->number;
        case Expr::Kind::Variable: return a->var_index == b->var_index;
        case Expr::Kind::Pi: return true;
        case Expr::Kind::Negate: return equal(a->lhs, b->lhs);
        case Expr::Kind::Binary:
            return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
    return false;
}

inline double evaluate(const Expr& e, std::span<const double> x) {
    switch (e.kind) {
        case Expr::Kind::Number: return e.number;
        case Expr::Kind::Pi: return std::numbers::pi;
        case Expr::Kind::Variable: {
            if (e.var_index < 1 || e.var_index > static_cast<int>(x.size()))
                throw EvalError("variable x" + std::to_string(e.var_index) +
                                " out of range for a " + std::to_string(x.size()) +
                                "-vector");
            return x[e.var_index - 1];
        }
        case Expr::Kind::Negate: return -evaluate(*e.lhs, x);
        case Expr::Kind::Binary: {
            const double a = evaluate(*e.lhs, x);
            const double b = evaluate(*e.rhs, x);
            double r;
            switch (e.op) {
                case '+': r = a + b; break;
                case '-': r = a - b; break;
                case '*': r = a * b; break;
                case '/':
                    if (b == 0.0) throw EvalError("division by zero");
                    r = a / b;
                    break;
                case '^':
                    if (a == 0.0 && b < 0.0) throw EvalError("zero raised to a negative power");
                    r = std::pow(a, b);
                    break;
                default: throw EvalError(std::string("unknown operator '") + e.op + "'");
            }
            if (!std::isfinite(r))
                throw EvalError(std::string("non-finite result of '") + e.op + "'");
            return r;
        }
    }
    throw EvalError("malformed expression");
}

inline int precedence_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary:
            if (e.op == '+' || e.op == '-') return 1;
            if (e.op == '*' || e.op == '/') return 2;
            return 4;  // ^
        case Expr::Kind::Negate: return 3;
        default: return 5;
    }
}

inline void print_to(const Expr& e, std::ostream& os) {
    auto child = [&](const Expr& c, bool needs_parens) {
        if (needs_parens) os << '(';
        print_to(c, os);
        if (needs_parens) os << ')';
    };
    switch (e.kind) {
        case Expr::Kind::Number: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << e.number;
            os << tmp.str();
            return;
        }
        case Expr::Kind::Variable: os << 'x' << e.var_index; return;
        case Expr::Kind::Pi: os << "pi"; return;
        case Expr::Kind::Negate:
            os << '-';
            child(*e.lhs, precedence_of(*e.lhs) < precedence_of(e));
            return;
        case Expr::Kind::Binary: {
            const int prec = precedence_of(e);
            // - and / are left-associative, ^ is right-associative.
            const bool right_assoc = e.op == '^';
            child(*e.lhs, precedence_of(*e.lhs) < prec + (right_assoc ? 1 : 0));
            os << ' ' << e.op << ' ';
            child(*e.rhs, precedence_of(*e.rhs) < prec + (right_assoc ? 0 : 1));
            return;
        }
    }
}

inline std::string print(const ExprPtr& e) {
    std::ostringstream os;
    print_to(*e, os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
    enum class Kind { Number, Ident, Symbol, Newline, End };
    Kind kind;
    std::string text;
    double value = 0.0;
    int line = 0;
    int column = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == '\n') {
                if (!tokens.empty() && tokens.back().kind != Token::Kind::Newline)
                    tokens.push_back({Token::Kind::Newline, "\n", 0.0, line_, col_});
                advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                tokens.push_back(number());
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                tokens.push_back(ident());
            } else {
                tokens.push_back(symbol());
            }
        }
        tokens.push_back({Token::Kind::End, "", 0.0, line_, col_});
        return tokens;
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    Token number() {
        const int l = line_, c = col_;
        const std::size_t start = pos_;
        if (src_[pos_] == '.' && (pos_ + 1 >= src_.size() ||
                                  !std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            // A lone '.' begins the '..' range symbol, not a number.
            return symbol();
        }
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            advance();
        if (pos_ < src_.size() && src_[pos_] == '.' &&
            !(pos_ + 1 < src_.size() && src_[pos_ + 1] == '.')) {
            advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
            } else {
                pos_ = mark;  // not an exponent after all
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        return {Token::Kind::Number, text, std::stod(text), l, c};
    }

    Token ident() {
        const int l = line_, c = col_;
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_'))
            advance();
        return {Token::Kind::Ident, std::string(src_.substr(start, pos_ - start)), 0.0, l, c};
    }

    Token symbol() {
        const int l = line_, c = col_;
        const char ch = src_[pos_];
        if (ch == '<' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
            advance();
            advance();
            return {Token::Kind::Symbol, "<=", 0.0, l, c};
        }
        if (ch == '.' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '.') {
            advance();
            advance();
            return {Token::Kind::Symbol, "..", 0.0, l, c};
        }
        advance();
        return {Token::Kind::Symbol, std::string(1, ch), 0.0, l, c};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Problem-spec file model
// ---------------------------------------------------------------------------

struct ConstraintClause {
    ExprPtr expr;
    double upper = 0.0;
    std::optional<double> lower;  // set for double-sided clauses
    int line = 0;
};

struct ProblemSpecFile {
    std::string name = "custom";
    int dimension = 0;
    ExprPtr objective;
    std::vector<ConstraintClause> constraints;
    std::vector<std::optional<VariableDomain>> domains;  // index 0 -> x1
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : tokens_(Lexer(src).run()) {}

    ExprPtr parse_single_expression() {
        skip_newlines();
        ExprPtr e = expression();
        skip_newlines();
        expect_end();
        return e;
    }

    ProblemSpecFile parse_file() {
        ProblemSpecFile spec;
        skip_newlines();
        if (peek().kind == Token::Kind::Ident && peek().text == "problem") {
            next();
            spec.name = expect_ident("problem name").text;
            end_of_line();
        }
        skip_newlines();
        {
            const Token& t = peek();
            if (!(t.kind == Token::Kind::Ident && t.text == "dimension"))
                fail("expected 'dimension <d>' before any other declaration", t);
            next();
            const Token& n = expect_number("dimension");
            spec.dimension = static_cast<int>(n.value);
            if (spec.dimension < 1 || n.value != spec.dimension)
                fail("dimension must be a positive integer", n);
            end_of_line();
        }
        spec.domains.assign(spec.dimension, std::nullopt);
        dimension_ = spec.dimension;

        while (true) {
            skip_newlines();
            const Token& t = peek();
            if (t.kind == Token::Kind::End) break;
            if (t.kind == Token::Kind::Ident && t.text == "minimize") {
                if (spec.objective) fail("duplicate 'minimize' declaration", t);
                next();
                spec.objective = expression();
                end_of_line();
            } else if (t.kind == Token::Kind::Ident && is_variable(t.text) &&
                       peek(1).kind == Token::Kind::Ident && peek(1).text == "in") {
                parse_domain(spec);
            } else {
                parse_constraint(spec);
            }
        }
        validate(spec);
        return spec;
    }

private:
    static bool is_variable(const std::string& s) {
        if (s.size() < 2 || s[0] != 'x') return false;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    }

    void parse_domain(ProblemSpecFile& spec) {
        const Token& v = next();
        const int index = std::stoi(v.text.substr(1));
        if (index < 1 || index > dimension_)
            fail("variable x" + std::to_string(index) + " exceeds dimension " +
                     std::to_string(dimension_),
                 v);
        if (spec.domains[index - 1])
            fail("duplicate domain declaration for x" + std::to_string(index), v);
        next();  // 'in'
        const Token& open = peek();
        if (open.kind == Token::Kind::Symbol && open.text == "[") {
            next();
            const double lo = signed_number("lower bound");
            expect_symbol(",");
            const double hi = signed_number("upper bound");
            expect_symbol("]");
            if (lo > hi) fail("lower bound exceeds upper bound", open);
            spec.domains[index - 1] = continuous(lo, hi);
        } else if (open.kind == Token::Kind::Symbol && open.text == "{") {
            next();
            const long lo = integer("grid minimum multiple");
            expect_symbol("..");
            const long hi = integer("grid maximum multiple");
            expect_symbol("}");
            expect_symbol("*");
            const double step = signed_number("grid step");
            if (step <= 0.0) fail("grid step must be positive", open);
            if (lo > hi) fail("grid minimum multiple exceeds maximum", open);
            spec.domains[index - 1] = grid(step, lo, hi);
        } else {
            fail("expected '[lo, hi]' or '{a..b} * step' after 'in'", open);
        }
        end_of_line();
    }

    void parse_constraint(ProblemSpecFile& spec) {
        const Token& start = peek();
        ExprPtr first = expression();
        expect_symbol("<=");
        ExprPtr second = expression();
        ConstraintClause clause;
        clause.line = start.line;
        if (peek().kind == Token::Kind::Symbol && peek().text == "<=") {
            next();
            ExprPtr third = expression();
            clause.lower = constant_value(first, start, "lower bound of a double-sided constraint");
            clause.upper = constant_value(third, start, "upper bound of a double-sided constraint");
            clause.expr = second;
            if (*clause.lower > clause.upper)
                fail("double-sided constraint has lower bound above upper bound", start);
        } else {
            clause.expr = first;
            clause.upper = constant_value(second, start, "right-hand side of a constraint");
        }
        end_of_line();
        spec.constraints.push_back(std::move(clause));
    }

    double constant_value(const ExprPtr& e, const Token& at, const std::string& what) {
        // Bounds must be plain (possibly negated) numeric literals.
        if (e->kind == Expr::Kind::Number) return e->number;
        if (e->kind == Expr::Kind::Negate && e->lhs->kind == Expr::Kind::Number)
            return -e->lhs->number;
        fail(what + " must be a number", at);
        return 0.0;
    }

    void validate(const ProblemSpecFile& spec) {
        if (!spec.objective)
            fail("missing 'minimize <expression>' declaration", peek());
        for (int i = 0; i < spec.dimension; ++i)
            if (!spec.domains[i])
                fail("no domain declared for x" + std::to_string(i + 1), peek());
        check_vars(*spec.objective);
        for (const auto& c : spec.constraints) check_vars(*c.expr);
    }

    void check_vars(const Expr& e) {
        if (e.kind == Expr::Kind::Variable) {
            if (e.var_index < 1 || e.var_index > dimension_)
                throw ParseError("undeclared variable x" + std::to_string(e.var_index) +
                                     " (dimension is " + std::to_string(dimension_) + ")",
                                 0, 0);
        }
        if (e.lhs) check_vars(*e.lhs);
        if (e.rhs) check_vars(*e.rhs);
    }

    // expression := term (('+'|'-') term)*
    ExprPtr expression() {
        ExprPtr e = term();
        while (peek().kind == Token::Kind::Symbol &&
               (peek().text == "+" || peek().text == "-")) {
            const char op = next().text[0];
            e = make_binary(op, e, term());
        }
        return e;
    }

    // term := factor (('*'|'/') factor)*
    ExprPtr term() {
        ExprPtr e = factor();
        while (peek().kind == Token::Kind::Symbol &&
               (peek().text == "*" || peek().text == "/")) {
            const char op = next().text[0];
            e = make_binary(op, e, factor());
        }
        return e;
    }

    // factor := '-' factor | power    (so ^ binds tighter than unary minus)
    ExprPtr factor() {
        if (peek().kind == Token::Kind::Symbol && peek().text == "-") {
            next();
            return make_negate(factor());
        }
        return power();
    }

    // power := primary ('^' factor)?  (right-associative)
    ExprPtr power() {
        ExprPtr base = primary();
        if (peek().kind == Token::Kind::Symbol && peek().text == "^") {
            next();
            return make_binary('^', base, factor());
        }
        return base;
    }

    ExprPtr primary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Number) {
            next();
            return make_number(t.value);
        }
        if (t.kind == Token::Kind::Ident) {
            if (t.text == "pi") {
                next();
                return make_pi();
            }
            if (is_variable(t.text)) {
                next();
                return make_variable(std::stoi(t.text.substr(1)));
            }
            fail("unknown identifier '" + t.text + "'", t);
        }
        if (t.kind == Token::Kind::Symbol && t.text == "(") {
            next();
            ExprPtr e = expression();
            expect_symbol(")");
            return e;
        }
        fail("expected a number, variable, 'pi', or '('", t);
        return nullptr;
    }

    double signed_number(const std::string& what) {
        bool neg = false;
        if (peek().kind == Token::Kind::Symbol && peek().text == "-") {
            next();
            neg = true;
        }
        const Token& t = expect_number(what);
        return neg ? -t.value : t.value;
    }

    long integer(const std::string& what) {
        const Token& at = peek();
        const double v = signed_number(what);
        const long n = static_cast<long>(v);
        if (static_cast<double>(n) != v) fail(what + " must be an integer", at);
        return n;
    }

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    void skip_newlines() {
        while (peek().kind == Token::Kind::Newline) next();
    }

    void end_of_line() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Newline) {
            next();
            return;
        }
        if (t.kind == Token::Kind::End) return;
        fail("unexpected '" + t.text + "' before end of line", t);
    }

    void expect_end() {
        if (peek().kind != Token::Kind::End)
            fail("unexpected trailing '" + peek().text + "'", peek());
    }

    const Token& expect_ident(const std::string& what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident) fail("expected " + what, t);
        return next();
    }

    const Token& expect_number(const std::string& what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Number) fail("expected " + what, t);
        return next();
    }

    void expect_symbol(const std::string& s) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Symbol || t.text != s) fail("expected '" + s + "'", t);
        next();
    }

    [[noreturn]] void fail(const std::string& message, const Token& at) {
        throw ParseError(message, at.line, at.column);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int dimension_ = 0;
};

}  // namespace detail

inline ExprPtr parse_expression(std::string_view source) {
    return detail::Parser(source).parse_single_expression();
}

inline ProblemSpecFile parse(std::string_view source) {
    return detail::Parser(source).parse_file();
}

/// Renders a spec back to .cop text; the result parses to an equivalent spec.
inline std::string print(const ProblemSpecFile& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "problem " << spec.name << "\n";
    os << "dimension " << spec.dimension << "\n";
    os << "minimize " << print(spec.objective) << "\n";
    for (int i = 0; i < spec.dimension; ++i) {
        const auto& d = *spec.domains[i];
        if (const auto* c = std::get_if<ContinuousDomain>(&d)) {
            os << "x" << (i + 1) << " in [" << c->lower << ", " << c->upper << "]\n";
        } else {
            const auto& g = std::get<GridDomain>(d);
            os << "x" << (i + 1) << " in {" << g.min_multiple << ".." << g.max_multiple
               << "} * " << g.step << "\n";
        }
    }
    for (const auto& c : spec.constraints) {
        if (c.lower)
            os << *c.lower << " <= " << print(c.expr) << " <= " << c.upper << "\n";
        else
            os << print(c.expr) << " <= " << c.upper << "\n";
    }
    return os.str();
}

/// Lowers a validated spec to a Problem interchangeable with the builtin
/// constructors; double-sided clauses are split into their two sides.
inline Problem compile(const ProblemSpecFile& spec) {
    Problem p;
    p.name = spec.name;
    p.dimension = spec.dimension;
    ExprPtr objective = spec.objective;
    p.objective = [objective](std::span<const double> x) {
        return evaluate(*objective, x);
    };
    for (const auto& clause : spec.constraints) {
        ExprPtr e = clause.expr;
        Evaluable g = [e](std::span<const double> x) { return evaluate(*e, x); };
        if (clause.lower) {
            auto [lo, hi] = split_double_sided(std::move(g), *clause.lower, clause.upper);
            p.constraints.push_back(std::move(lo));
            p.constraints.push_back(std::move(hi));
        } else if (clause.upper == 0.0) {
            p.constraints.push_back(std::move(g));
        } else {
            const double u = clause.upper;
            p.constraints.push_back(
                [g = std::move(g), u](std::span<const double> x) { return g(x) - u; });
        }
    }
    for (const auto& d : spec.domains) p.domains.push_back(*d);
    return p;
}

inline Problem compile(std::string_view source) { return compile(parse(source)); }

}  // namespace psa::dsl
