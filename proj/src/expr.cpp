#include "qev/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace qev {

Expr::Ptr Expr::constant(double v) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Constant;
    e->value_ = v;
    return e;
}

Expr::Ptr Expr::symbol(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Symbol;
    e->name_ = std::move(name);
    return e;
}

Expr::Ptr Expr::unary(Op op, Ptr a) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Unary;
    e->op_ = op;
    e->a_ = std::move(a);
    return e;
}

Expr::Ptr Expr::binary(Op op, Ptr a, Ptr b) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Binary;
    e->op_ = op;
    e->a_ = std::move(a);
    e->b_ = std::move(b);
    return e;
}

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out) {
    switch (e.kind()) {
        case Expr::Kind::Constant: break;
        case Expr::Kind::Symbol: out.insert(e.name()); break;
        case Expr::Kind::Unary: collect_symbols(*e.lhs(), out); break;
        case Expr::Kind::Binary:
            collect_symbols(*e.lhs(), out);
            collect_symbols(*e.rhs(), out);
            break;
    }
}

const char* unary_name(Expr::Op op) {
    switch (op) {
        case Expr::Op::Sin: return "sin";
        case Expr::Op::Cos: return "cos";
        case Expr::Op::Tan: return "tan";
        case Expr::Op::Exp: return "exp";
        case Expr::Op::Log: return "log";
        case Expr::Op::Sqrt: return "sqrt";
        case Expr::Op::Abs: return "abs";
        default: return "?";
    }
}

int precedence(Expr::Op op) {
    switch (op) {
        case Expr::Op::Add:
        case Expr::Op::Sub: return 1;
        case Expr::Op::Mul:
        case Expr::Op::Div: return 2;
        case Expr::Op::Pow: return 4;
        default: return 3;  // unary minus
    }
}

std::string print(const Expr& e, int parent_prec) {
    std::string s;
    int prec = 5;
    switch (e.kind()) {
        case Expr::Kind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", e.value());
            s = buf;
            if (e.value() < 0) prec = 3;
            break;
        }
        case Expr::Kind::Symbol:
            s = e.name();
            break;
        case Expr::Kind::Unary:
            if (e.op() == Expr::Op::Neg) {
                prec = 3;
                s = "-" + print(*e.lhs(), 3);
            } else {
                s = std::string(unary_name(e.op())) + "(" + print(*e.lhs(), 0) + ")";
            }
            break;
        case Expr::Kind::Binary: {
            prec = precedence(e.op());
            const char* sym = e.op() == Expr::Op::Add   ? "+"
                              : e.op() == Expr::Op::Sub ? "-"
                              : e.op() == Expr::Op::Mul ? "*"
                              : e.op() == Expr::Op::Div ? "/"
                                                        : "^";
            // anti-associative sides get a bumped precedence so the printed
            // form re-parses to the same tree
            int lp = prec, rp = prec;
            if (e.op() == Expr::Op::Sub || e.op() == Expr::Op::Div) rp = prec + 1;
            if (e.op() == Expr::Op::Pow) lp = prec + 1;  // right-associative
            s = print(*e.lhs(), lp) + sym + print(*e.rhs(), rp);
            break;
        }
    }
    if (prec < parent_prec) s = "(" + s + ")";
    return s;
}

}  // namespace

std::set<std::string> Expr::free_symbols() const {
    std::set<std::string> out;
    collect_symbols(*this, out);
    return out;
}

std::string Expr::to_string() const { return print(*this, 0); }

double Expr::eval(const Bindings& b) const {
    double r = 0.0;
    switch (kind_) {
        case Kind::Constant:
            return value_;
        case Kind::Symbol: {
            auto it = b.find(name_);
            if (it == b.end()) throw EvalError("unbound symbol", name_);
            return it->second;
        }
        case Kind::Unary: {
            double x = a_->eval(b);
            switch (op_) {
                case Op::Neg: r = -x; break;
                case Op::Sin: r = std::sin(x); break;
                case Op::Cos: r = std::cos(x); break;
                case Op::Tan: r = std::tan(x); break;
                case Op::Exp: r = std::exp(x); break;
                case Op::Log:
                    if (x <= 0.0) throw EvalError("log of nonpositive value", to_string());
                    r = std::log(x);
                    break;
                case Op::Sqrt:
                    if (x < 0.0) throw EvalError("sqrt of negative value", to_string());
                    r = std::sqrt(x);
                    break;
                case Op::Abs: r = std::fabs(x); break;
                default: throw EvalError("bad unary op", to_string());
            }
            break;
        }
        case Kind::Binary: {
            double x = a_->eval(b);
            double y = b_->eval(b);
            switch (op_) {
                case Op::Add: r = x + y; break;
                case Op::Sub: r = x - y; break;
                case Op::Mul: r = x * y; break;
                case Op::Div:
                    if (y == 0.0) throw EvalError("division by zero", to_string());
                    r = x / y;
                    break;
                case Op::Pow: r = std::pow(x, y); break;
                default: throw EvalError("bad binary op", to_string());
            }
            break;
        }
    }
    if (std::isnan(r)) throw EvalError("NaN result", to_string());
    return r;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := atom ('^' factor)?          (right-associative, binds above '-')
//   atom    := number | ident | ident '(' args ')' | '(' expr ')'

namespace {

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos);
    }

    Expr::Ptr parse_expr() {
        auto lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = Expr::binary(Expr::Op::Add, lhs, parse_term());
            else if (accept('-'))
                lhs = Expr::binary(Expr::Op::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    Expr::Ptr parse_term() {
        auto lhs = parse_factor();
        for (;;) {
            if (accept('*'))
                lhs = Expr::binary(Expr::Op::Mul, lhs, parse_factor());
            else if (accept('/'))
                lhs = Expr::binary(Expr::Op::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    Expr::Ptr parse_factor() {
        if (accept('-')) return Expr::unary(Expr::Op::Neg, parse_factor());
        return parse_power();
    }

    Expr::Ptr parse_power() {
        auto base = parse_atom();
        if (accept('^')) return Expr::binary(Expr::Op::Pow, base, parse_factor());
        return base;
    }

    Expr::Ptr parse_atom() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        if (accept('(')) {
            auto e = parse_expr();
            expect(')');
            return e;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    Expr::Ptr parse_number() {
        const char* start = text.c_str() + pos;
        char* end = nullptr;
        double v = std::strtod(start, &end);
        if (end == start) throw ParseError("bad number", pos);
        pos += static_cast<std::size_t>(end - start);
        skip_ws();
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            throw ParseError("implicit multiplication is not allowed", pos);
        return Expr::constant(v);
    }

    Expr::Ptr parse_ident() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name = text.substr(start, pos - start);
        if (peek('(')) {
            ++pos;
            if (name == "pow") {
                auto x = parse_expr();
                expect(',');
                auto y = parse_expr();
                expect(')');
                return Expr::binary(Expr::Op::Pow, x, y);
            }
            Expr::Op op;
            if (name == "sin") op = Expr::Op::Sin;
            else if (name == "cos") op = Expr::Op::Cos;
            else if (name == "tan") op = Expr::Op::Tan;
            else if (name == "exp") op = Expr::Op::Exp;
            else if (name == "log") op = Expr::Op::Log;
            else if (name == "sqrt") op = Expr::Op::Sqrt;
            else if (name == "abs") op = Expr::Op::Abs;
            else throw ParseError("unknown function '" + name + "'", start);
            auto arg = parse_expr();
            expect(')');
            return Expr::unary(op, arg);
        }
        if (name == "pi") return Expr::constant(M_PI);
        if (name == "e") return Expr::constant(M_E);
        return Expr::symbol(name);
    }
};

}  // namespace

Expr::Ptr parse(const std::string& text) {
    Parser p(text);
    auto e = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("trailing input", p.pos);
    return e;
}

}  // namespace qev
