#include <pscont/expression.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace pscont {

struct Expression::Node {
    enum class Kind { number, variable, neg, add, sub, mul, div, pow, call } kind;
    Complex value{};
    char variable = 0;
    Complex (*fn)(const Complex&) = nullptr;
    std::shared_ptr<const Node> lhs, rhs;

    Complex eval(double x, double s, double t) const
    {
        switch (kind) {
        case Kind::number: return value;
        case Kind::variable: return variable == 'x' ? x : variable == 's' ? s : t;
        case Kind::neg: return -lhs->eval(x, s, t);
        case Kind::add: return lhs->eval(x, s, t) + rhs->eval(x, s, t);
        case Kind::sub: return lhs->eval(x, s, t) - rhs->eval(x, s, t);
        case Kind::mul: return lhs->eval(x, s, t) * rhs->eval(x, s, t);
        case Kind::div: return lhs->eval(x, s, t) / rhs->eval(x, s, t);
        case Kind::pow: {
            const Complex b = lhs->eval(x, s, t), p = rhs->eval(x, s, t);
            // integer powers by repeated multiplication keep real bases real
            if (p.imag() == 0.0 && p.real() == std::round(p.real()) && std::abs(p.real()) <= 64.0) {
                int n = static_cast<int>(p.real());
                Complex r = 1.0, f = b;
                for (int m = std::abs(n); m > 0; m >>= 1, f *= f)
                    if (m & 1)
                        r *= f;
                return n < 0 ? 1.0 / r : r;
            }
            return std::pow(b, p);
        }
        case Kind::call: return fn(lhs->eval(x, s, t));
        }
        return {};
    }

    bool uses(char v) const
    {
        if (kind == Kind::variable)
            return variable == v;
        return (lhs && lhs->uses(v)) || (rhs && rhs->uses(v));
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

Complex c_exp(const Complex& z) { return std::exp(z); }
Complex c_sin(const Complex& z) { return std::sin(z); }
Complex c_cos(const Complex& z) { return std::cos(z); }
Complex c_sqrt(const Complex& z) { return std::sqrt(z); }
Complex c_log(const Complex& z) { return std::log(z); }

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr)
{
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse()
    {
        NodePtr e = expr();
        skip();
        if (pos_ < s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        std::ostringstream msg;
        msg << "expression '" << s_ << "', column " << pos_ + 1 << ": " << what;
        throw ConfigError(msg.str());
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr()
    {
        NodePtr a = term();
        for (;;) {
            if (accept('+'))
                a = make(Node::Kind::add, a, term());
            else if (accept('-'))
                a = make(Node::Kind::sub, a, term());
            else
                return a;
        }
    }

    NodePtr term()
    {
        NodePtr a = unary();
        for (;;) {
            if (accept('*'))
                a = make(Node::Kind::mul, a, unary());
            else if (accept('/'))
                a = make(Node::Kind::div, a, unary());
            else
                return a;
        }
    }

    NodePtr unary()
    {
        if (accept('-'))
            return make(Node::Kind::neg, unary());
        if (accept('+'))
            return unary();
        return power();
    }

    NodePtr power()
    {
        NodePtr a = atom();
        if (accept('^'))
            return make(Node::Kind::pow, a, unary());
        return a;
    }

    NodePtr atom()
    {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        const char c = s_[pos_];
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')'))
                fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (ec != std::errc())
                fail("bad number");
            pos_ = static_cast<std::size_t>(end - s_.data());
            auto n = make(Node::Kind::number);
            std::const_pointer_cast<Node>(n)->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string_view name = s_.substr(start, pos_ - start);
            return named(name, start);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr named(std::string_view name, std::size_t start)
    {
        auto n = std::make_shared<Node>();
        if (name == "x" || name == "s" || name == "t") {
            n->kind = Node::Kind::variable;
            n->variable = name[0];
            return n;
        }
        if (name == "i" || name == "pi" || name == "e") {
            n->kind = Node::Kind::number;
            n->value = name == "i" ? Complex(0.0, 1.0) : name == "pi" ? Complex(std::acos(-1.0)) : Complex(std::exp(1.0));
            return n;
        }
        Complex (*fn)(const Complex&) = name == "exp"    ? c_exp
                                        : name == "sin"  ? c_sin
                                        : name == "cos"  ? c_cos
                                        : name == "sqrt" ? c_sqrt
                                        : name == "log"  ? c_log
                                                         : nullptr;
        if (!fn) {
            pos_ = start;
            fail("unknown name '" + std::string(name) + "'");
        }
        if (!accept('('))
            fail("expected '(' after " + std::string(name));
        n->kind = Node::Kind::call;
        n->fn = fn;
        n->lhs = expr();
        if (!accept(')'))
            fail("expected ')'");
        return n;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

Expression::Expression()
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::number;
    root_ = n;
    text_ = "0";
}

Expression Expression::parse(std::string_view text)
{
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = std::string(text);
    return e;
}

Complex Expression::eval(double x, double s, double t) const { return root_->eval(x, s, t); }

bool Expression::uses(char variable) const { return root_->uses(variable); }

} // namespace pscont
