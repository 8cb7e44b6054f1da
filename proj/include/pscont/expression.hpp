#pragma once

// Arithmetic expressions for coefficients and kernels given as text.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
//
// Names: variables x, s, t; constants i, pi, e; functions exp, sin, cos,
// sqrt, log. '^' is right associative and binds tighter than unary minus,
// so -x^2 is -(x^2).

#include <pscont/types.hpp>

#include <memory>
#include <string_view>

namespace pscont {

class Expression {
public:
    Expression();
    /// ConfigError with the column of the offending token.
    static Expression parse(std::string_view text);

    Complex operator()(double x) const { return eval(x, x, 0.0); }
    Complex operator()(double s, double t) const { return eval(s, s, t); }
    Complex eval(double x, double s, double t) const;

    bool uses(char variable) const;
    /// True when no variable occurs.
    bool constant() const { return !uses('x') && !uses('s') && !uses('t'); }
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace pscont
