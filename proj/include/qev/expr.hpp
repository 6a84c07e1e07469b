#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace qev {

// Closed-form scalar expressions in chart coordinates.  Trees are immutable
// after parsing; eval is a pure function, safe to call concurrently.

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

struct EvalError : std::runtime_error {
    std::string subexpr;
    EvalError(const std::string& msg, std::string sub)
        : std::runtime_error(msg + " in '" + sub + "'"), subexpr(std::move(sub)) {}
};

using Bindings = std::map<std::string, double>;

class Expr {
  public:
    enum class Kind { Constant, Symbol, Unary, Binary };
    enum class Op { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Add, Sub, Mul, Div, Pow };

    using Ptr = std::shared_ptr<const Expr>;

    static Ptr constant(double v);
    static Ptr symbol(std::string name);
    static Ptr unary(Op op, Ptr a);
    static Ptr binary(Op op, Ptr a, Ptr b);

    Kind kind() const { return kind_; }
    Op op() const { return op_; }
    double value() const { return value_; }
    const std::string& name() const { return name_; }
    const Ptr& lhs() const { return a_; }
    const Ptr& rhs() const { return b_; }

    double eval(const Bindings& b) const;
    std::set<std::string> free_symbols() const;
    std::string to_string() const;

  private:
    Kind kind_ = Kind::Constant;
    Op op_ = Op::Neg;
    double value_ = 0.0;
    std::string name_;
    Ptr a_, b_;
};

// Single infix expression.  Recognized constants: pi, e.  Functions:
// sin cos tan exp log sqrt abs, pow(x,y).  `^` is right-associative and
// binds tighter than unary minus.  No implicit multiplication.
Expr::Ptr parse(const std::string& text);

}  // namespace qev
