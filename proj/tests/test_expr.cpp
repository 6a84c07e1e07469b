#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "qev/expr.hpp"

using qev::Bindings;
using qev::parse;

namespace {

// Independent shunting-yard evaluator over the same token set, used as an
// oracle for precedence and associativity.
double shunting_yard(const std::string& text, const Bindings& b) {
    struct Tok {
        enum { Num, Op, LParen, RParen, Func, Comma } kind;
        double num = 0.0;
        std::string s;
    };
    std::vector<Tok> toks;
    std::size_t i = 0;
    auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    bool prev_value = false;  // last token completes a value (number, ident, ')')
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = std::stod(text.substr(i), &used);
            toks.push_back({Tok::Num, v, ""});
            i += used;
            prev_value = true;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && is_ident(text[j])) ++j;
            std::string name = text.substr(i, j - i);
            i = j;
            if (i < text.size() && text[i] == '(') {
                toks.push_back({Tok::Func, 0.0, name});
            } else if (name == "pi") {
                toks.push_back({Tok::Num, M_PI, ""});
            } else if (name == "e") {
                toks.push_back({Tok::Num, std::exp(1.0), ""});
            } else {
                toks.push_back({Tok::Num, b.at(name), ""});
            }
            prev_value = true;
        } else if (c == '(') {
            toks.push_back({Tok::LParen, 0.0, ""});
            ++i;
            prev_value = false;
        } else if (c == ')') {
            toks.push_back({Tok::RParen, 0.0, ""});
            ++i;
            prev_value = true;
        } else if (c == ',') {
            toks.push_back({Tok::Comma, 0.0, ""});
            ++i;
            prev_value = false;
        } else {
            std::string op(1, c);
            if (c == '-' && !prev_value) op = "u-";
            toks.push_back({Tok::Op, 0.0, op});
            ++i;
            prev_value = false;
        }
    }

    auto prec = [](const std::string& op) {
        if (op == "+" || op == "-") return 1;
        if (op == "*" || op == "/") return 2;
        if (op == "u-") return 3;
        if (op == "^") return 4;
        return 0;
    };
    auto right_assoc = [](const std::string& op) { return op == "^" || op == "u-"; };

    std::vector<Tok> output, stack;
    for (const auto& t : toks) {
        switch (t.kind) {
            case Tok::Num:
                output.push_back(t);
                break;
            case Tok::Func:
            case Tok::LParen:
                stack.push_back(t);
                break;
            case Tok::Comma:
                while (!stack.empty() && stack.back().kind != Tok::LParen &&
                       stack.back().kind != Tok::Func) {
                    output.push_back(stack.back());
                    stack.pop_back();
                }
                break;
            case Tok::RParen:
                while (!stack.empty() && stack.back().kind == Tok::Op) {
                    output.push_back(stack.back());
                    stack.pop_back();
                }
                REQUIRE(!stack.empty());
                stack.pop_back();  // the matching LParen
                if (!stack.empty() && stack.back().kind == Tok::Func) {
                    output.push_back(stack.back());
                    stack.pop_back();
                }
                break;
            case Tok::Op:
                while (!stack.empty() && stack.back().kind == Tok::Op &&
                       (prec(stack.back().s) > prec(t.s) ||
                        (prec(stack.back().s) == prec(t.s) && !right_assoc(t.s)))) {
                    output.push_back(stack.back());
                    stack.pop_back();
                }
                stack.push_back(t);
                break;
        }
    }
    while (!stack.empty()) {
        output.push_back(stack.back());
        stack.pop_back();
    }

    std::vector<double> vals;
    for (const auto& t : output) {
        if (t.kind == Tok::Num) {
            vals.push_back(t.num);
        } else if (t.kind == Tok::Func) {
            if (t.s == "pow") {
                double y = vals.back();
                vals.pop_back();
                vals.back() = std::pow(vals.back(), y);
            } else {
                double x = vals.back();
                if (t.s == "sin") vals.back() = std::sin(x);
                else if (t.s == "cos") vals.back() = std::cos(x);
                else if (t.s == "tan") vals.back() = std::tan(x);
                else if (t.s == "exp") vals.back() = std::exp(x);
                else if (t.s == "log") vals.back() = std::log(x);
                else if (t.s == "sqrt") vals.back() = std::sqrt(x);
                else if (t.s == "abs") vals.back() = std::fabs(x);
                else FAIL("unknown function ", t.s);
            }
        } else if (t.s == "u-") {
            vals.back() = -vals.back();
        } else {
            double y = vals.back();
            vals.pop_back();
            double x = vals.back();
            if (t.s == "+") vals.back() = x + y;
            else if (t.s == "-") vals.back() = x - y;
            else if (t.s == "*") vals.back() = x * y;
            else if (t.s == "/") vals.back() = x / y;
            else if (t.s == "^") vals.back() = std::pow(x, y);
            else FAIL("unknown operator ", t.s);
        }
    }
    REQUIRE(vals.size() == 1);
    return vals[0];
}

}  // namespace

TEST_CASE("free symbol sets") {
    CHECK(parse("sin(u1)*2 + c")->free_symbols() == std::set<std::string>{"u1", "c"});
    CHECK(parse("1/(R + r*cos(u2))")->free_symbols() == std::set<std::string>{"R", "r", "u2"});
    CHECK(parse("pi + e")->free_symbols().empty());
}

TEST_CASE("evaluation basics") {
    CHECK(parse("sin(pi/2)")->eval({}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(parse("(R + r*cos(u2))^2")->eval({{"R", 2.0}, {"r", 1.0}, {"u2", 0.0}}) ==
          doctest::Approx(9.0).epsilon(1e-15));
    CHECK(parse("pow(2, 10)")->eval({}) == 1024.0);
    CHECK(parse("2^3^2")->eval({}) == 512.0);   // right-associative
    CHECK(parse("-2^2")->eval({}) == -4.0);     // pow binds above unary minus
    CHECK(parse("abs(-3)")->eval({}) == 3.0);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse("sin("), qev::ParseError);
    try {
        parse("sin(");
    } catch (const qev::ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse("2u1"), qev::ParseError);  // no implicit multiplication
    CHECK_THROWS_AS(parse("foo(1)"), qev::ParseError);
    CHECK_THROWS_AS(parse(""), qev::ParseError);
    CHECK_THROWS_AS(parse("1 +"), qev::ParseError);
}

TEST_CASE("domain errors name the offending subexpression") {
    CHECK_THROWS_AS(parse("log(u1)")->eval({{"u1", -1.0}}), qev::EvalError);
    CHECK_THROWS_AS(parse("1/u1")->eval({{"u1", 0.0}}), qev::EvalError);
    CHECK_THROWS_AS(parse("sqrt(0 - 2)")->eval({}), qev::EvalError);
    CHECK_THROWS_AS(parse("x + 1")->eval({}), qev::EvalError);  // unbound symbol
}

TEST_CASE("precedence matches a shunting-yard oracle on random bindings") {
    const std::vector<std::string> exprs = {
        "a+b*c",
        "a*b+c*d",
        "a-b-c",
        "a/b/c",
        "(abs(a)+1)^b^2",
        "-a^2 + b",
        "a*(b+c)/d - e",
        "sin(a)*cos(b) + tan(a/4)",
        "pow(a, 2) + sqrt(abs(b))",
        "exp(a/8) - log(abs(c) + 1)",
        "2*pi*a - e^b",
        "(a+b)*(c-d)^2",
    };
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (const auto& text : exprs) {
        auto e = parse(text);
        for (int trial = 0; trial < 100; ++trial) {
            Bindings b;
            for (const auto& s : e->free_symbols()) b[s] = dist(rng);
            for (char c : {'a', 'b', 'c', 'd', 'e'})
                if (!b.count(std::string(1, c))) b[std::string(1, c)] = dist(rng);
            double got = e->eval(b);
            double want = shunting_yard(text, b);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("pretty-print round trip is idempotent") {
    const std::vector<std::string> exprs = {
        "a+b*c", "a-(b-c)", "a/b/c", "a^b^c", "-sin(u1)^2", "(a+b)*c",
        "pow(a, b+1)", "1/(R + r*cos(u2))", "sqrt(abs(a))",
    };
    for (const auto& text : exprs) {
        std::string once = parse(text)->to_string();
        std::string twice = parse(once)->to_string();
        CHECK(once == twice);
        // printed form evaluates identically
        Bindings b;
        for (const auto& s : parse(text)->free_symbols()) b[s] = 0.7;
        CHECK(parse(once)->eval(b) == doctest::Approx(parse(text)->eval(b)).epsilon(1e-14));
    }
}

TEST_CASE("deterministic evaluation") {
    auto e = parse("sin(a)*exp(b) - a/b + a^b");
    Bindings b{{"a", 0.3}, {"b", 1.7}};
    double first = e->eval(b);
    for (int i = 0; i < 10; ++i) CHECK(e->eval(b) == first);
}
