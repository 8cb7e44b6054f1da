#include <doctest.h>

#include <pscont/config.hpp>
#include <pscont/expression.hpp>

#include "oracles/frozen.hpp"
#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <functional>

using namespace pscont;

namespace {

/// Random expression: text with full parentheses and a direct evaluator.
struct Tree {
    std::string text;
    std::function<Complex(double, double, double)> f;
};

Tree leaf(testgen::Gen& g)
{
    switch (g.index(0, 6)) {
    case 0: return {"x", [](double x, double, double) { return Complex(x); }};
    case 1: return {"s", [](double, double s, double) { return Complex(s); }};
    case 2: return {"t", [](double, double, double t) { return Complex(t); }};
    case 3: return {"i", [](double, double, double) { return Complex(0, 1); }};
    case 4: return {"pi", [](double, double, double) { return Complex(3.14159265358979323846); }};
    case 5: return {"e", [](double, double, double) { return Complex(2.71828182845904523536); }};
    default: {
        const double v = std::round(g.uniform(0.0, 100.0) * 8.0) / 8.0;
        return {format_double(v), [v](double, double, double) { return Complex(v); }};
    }
    }
}

Tree random_tree(testgen::Gen& g, int depth)
{
    if (depth == 0 || g.uniform() < 0.25)
        return leaf(g);
    const std::size_t kind = g.index(0, 9);
    if (kind <= 3) {
        Tree a = random_tree(g, depth - 1), b = random_tree(g, depth - 1);
        const char op = "+-*/"[kind];
        auto fa = a.f, fb = b.f;
        std::function<Complex(double, double, double)> f;
        switch (op) {
        case '+': f = [fa, fb](double x, double s, double t) { return fa(x, s, t) + fb(x, s, t); }; break;
        case '-': f = [fa, fb](double x, double s, double t) { return fa(x, s, t) - fb(x, s, t); }; break;
        case '*': f = [fa, fb](double x, double s, double t) { return fa(x, s, t) * fb(x, s, t); }; break;
        default: f = [fa, fb](double x, double s, double t) { return fa(x, s, t) / fb(x, s, t); }; break;
        }
        return {"(" + a.text + " " + op + " " + b.text + ")", f};
    }
    Tree a = random_tree(g, depth - 1);
    auto fa = a.f;
    switch (kind) {
    case 4: return {"(-" + a.text + ")", [fa](double x, double s, double t) { return -fa(x, s, t); }};
    case 5: {
        const int p = static_cast<int>(g.index(0, 4));
        return {"(" + a.text + ")^" + std::to_string(p),
                [fa, p](double x, double s, double t) { return std::pow(fa(x, s, t), p); }};
    }
    case 6: return {"exp(" + a.text + ")", [fa](double x, double s, double t) { return std::exp(fa(x, s, t)); }};
    case 7: return {"sin(" + a.text + ")", [fa](double x, double s, double t) { return std::sin(fa(x, s, t)); }};
    case 8: return {"cos(" + a.text + ")", [fa](double x, double s, double t) { return std::cos(fa(x, s, t)); }};
    default: return {"sqrt(" + a.text + ")", [fa](double x, double s, double t) { return std::sqrt(fa(x, s, t)); }};
    }
}

ProblemConfig random_config(testgen::Gen& g)
{
    ProblemConfig c;
    const std::size_t kind = g.index(0, 3);
    if (kind == 0) {
        const char* names[] = {"advdiff", "go", "wiener-hopf", "laser", "orr-sommerfeld"};
        c.preset = names[g.index(0, 4)];
        c.params.d = g.uniform(1, 20);
        c.params.eta = g.uniform(1e-3, 1);
        c.params.reynolds = g.uniform(100, 1e5);
        c.params.alpha = g.uniform(0.5, 2);
        c.params.fresnel = g.uniform(1, 100);
        c.params.magnification = g.uniform(1.1, 4);
    } else {
        c.a = g.uniform(-3, 0);
        c.b = c.a + g.uniform(0.1, 5);
        if (kind == 1) {
            c.family = "differential";
            const int order = static_cast<int>(g.index(1, 3));
            for (int k = 0; k <= order; ++k)
                c.coefficients[k] = g.uniform() < 0.5 ? format_double(g.uniform(-2, 2)) : "x^2 + " + std::to_string(k);
            const char* sides[] = {"left", "right"};
            for (int k = 0; k < order; ++k) {
                c.bcs += std::string(k ? " " : "") + sides[g.index(0, 1)] + ":" + std::to_string(g.index(0, 1));
                c.adjoint_bcs += std::string(k ? " " : "") + sides[g.index(0, 1)];
            }
            if (g.uniform() < 0.3) {
                c.method = "finite_section";
                c.weighting = g.uniform() < 0.5 ? Weighting::clenshaw_curtis : Weighting::gauss_chebyshev;
            }
        } else {
            c.family = kind == 2 ? "fredholm" : "volterra";
            c.kernel = g.uniform() < 0.5 ? "exp(s - t)" : "cos(s*t) + i*s";
            c.scale = format_double(g.uniform(-2, 2)) + " + " + format_double(g.uniform(0, 2)) + "*i";
            c.direction = g.uniform() < 0.5 ? "left" : "right";
        }
    }
    c.delta = g.uniform() < 0.5 ? 0.0 : g.uniform(0, 1e-2);
    c.c_l = g.uniform(1, 1000);
    c.eps = g.uniform(1e-16, 1e-10);
    c.n_max = g.index(16, 1 << 20);
    c.k_max = g.index(1, 1000);
    c.seed = g.next();
    c.n = g.index(4, 400);
    if (g.uniform() < 0.6) {
        GridSpec s;
        s.re_min = g.uniform(-10, 0);
        s.re_max = s.re_min + g.uniform(0.1, 10);
        s.im_min = g.uniform(-10, 0);
        s.im_max = s.im_min + g.uniform(0.1, 10);
        s.nx = g.index(2, 200);
        s.ny = g.index(2, 200);
        double l = g.uniform(0.1, 1);
        for (std::size_t k = g.index(0, 5); k > 0; --k) {
            s.levels.push_back(l);
            l *= g.uniform(0.01, 0.9);
        }
        c.grid = s;
    }
    return c;
}

std::string error_of(std::string_view text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("expression evaluation against random trees")
{
    std::size_t compared = 0;
    for (std::size_t c = 0; c < 300; ++c) {
        testgen::Gen g(c);
        const Tree t = random_tree(g, 4);
        const Expression e = Expression::parse(t.text);
        CHECK(e.text() == t.text);
        for (int k = 0; k < 3; ++k) {
            const double x = g.uniform(-2, 2), s = g.uniform(-2, 2), u = g.uniform(-2, 2);
            const Complex want = t.f(x, s, u);
            if (!std::isfinite(std::abs(want)) || std::abs(want) > 1e12)
                continue;
            const Complex got = e.eval(x, s, u);
            INFO(t.text);
            CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
            ++compared;
        }
    }
    CHECK(compared >= 300);
}

TEST_CASE("expression precedence and names")
{
    CHECK(Expression::parse("-x^2")(3.0) == Complex(-9.0));
    CHECK(Expression::parse("2^3^2")(0.0) == Complex(512.0));
    CHECK(Expression::parse("1/2/2")(0.0) == Complex(0.25));
    CHECK(Expression::parse("2*3+4")(0.0) == Complex(10.0));
    CHECK(std::abs(Expression::parse("exp(i*pi)")(0.0) + 1.0) < 1e-15);
    CHECK(std::abs(Expression::parse("log(e) + sqrt(4)")(0.0) - 3.0) < 1e-15);
    CHECK(Expression::parse("1.5e-3")(0.0) == Complex(1.5e-3));
    const Expression k = Expression::parse("exp(s - t)");
    CHECK(k.uses('s'));
    CHECK(k.uses('t'));
    CHECK(!k.uses('x'));
    CHECK(!k.constant());
    CHECK(Expression::parse("2 + 3*i").constant());
    CHECK(std::abs(k(1.0, 0.5) - std::exp(0.5)) < 1e-15);
}

TEST_CASE("expression errors carry the column")
{
    auto message = [](const char* text) {
        try {
            Expression::parse(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("x +").find("column 4") != std::string::npos);
    CHECK(message("foo(x)").find("column 1") != std::string::npos);
    CHECK(message("(x").find("expression '(x'") != std::string::npos);
    CHECK(!message("x y").empty());
    CHECK(!message("").empty());
    CHECK(!message("2 $ 3").empty());
}

TEST_CASE("config serialization round trips")
{
    for (std::size_t c = 0; c < 150; ++c) {
        testgen::Gen g(1000 + c);
        const ProblemConfig cfg = random_config(g);
        const std::string text = serialize_config(cfg);
        INFO(text);
        const ProblemConfig back = parse_config(text);
        CHECK(back == cfg);
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("config errors")
{
    CHECK(error_of("[problem]\npreset = advdiff\ncolour = red\n") == "[problem] colour: unknown key");
    CHECK(error_of("[extras]\nx = 1\n").find("unknown section [extras]") != std::string::npos);
    CHECK(error_of("[problem]\n").find("exactly one of preset and family") != std::string::npos);
    CHECK(error_of("[problem]\npreset = advdiff\nfamily = fredholm\nkernel = 1\n").find("exactly one") !=
          std::string::npos);
    CHECK(error_of("[problem]\npreset = nope\n").find("[problem] preset") != std::string::npos);
    CHECK(error_of("[problem]\nfamily = fredholm\n").find("kernel") != std::string::npos);
    CHECK(error_of("[problem]\nfamily = fredholm\nkernel = exp(x)\n").find("use s and t") != std::string::npos);
    CHECK(error_of("[problem]\nfamily = volterra\nkernel = s\nscale = s\n").find("scale") != std::string::npos);
    CHECK(error_of("[problem]\nfamily = differential\na0 = 0\na1 = 1\nbcs = left right\nadjoint_bcs = right\n")
              .find("bcs") != std::string::npos);
    CHECK(error_of("[problem]\nfamily = differential\na0 = 0\na1 = 1\nbcs = middle\nadjoint_bcs = left\n")
              .find("side must be left or right") != std::string::npos);
    CHECK(error_of("[problem]\npreset = go\n[solver]\ndelta = -1\n") == "[solver] delta: must be >= 0");
    CHECK(error_of("[problem]\npreset = go\n[solver]\nk_max = many\n").find("non-negative integer") !=
          std::string::npos);
    CHECK(error_of("[problem]\npreset = go\n[grid]\nnx = 1\n").find("[grid]") != std::string::npos);
    CHECK(error_of("[problem]\nfamily = fredholm\nkernel = s\n[solver]\nmethod = finite_section\n")
              .find("finite_section needs a differential problem") != std::string::npos);
    CHECK(error_of("[problem]\npreset = go\nbroken line\n").find("line") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/problem.ini"), IoError);
}

TEST_CASE("boundary lists")
{
    const auto b = parse_boundary_list("left right:1");
    REQUIRE(b.size() == 2);
    CHECK(b[0].terms[0].side == BoundaryFunctional::Side::left);
    CHECK(b[0].terms[0].derivative == 0);
    CHECK(b[1].terms[0].side == BoundaryFunctional::Side::right);
    CHECK(b[1].terms[0].derivative == 1);
    CHECK(parse_boundary_list("").empty());
    CHECK_THROWS_AS(parse_boundary_list("left:x"), ConfigError);
}

TEST_CASE("inline problems reproduce the presets")
{
    const ProblemConfig inline_ad = parse_config("[problem]\nfamily = differential\na = 0\nb = 1\n"
                                                 "a0 = 0\na1 = 1\na2 = 0.015\nbcs = left right\n"
                                                 "adjoint_bcs = left right\n");
    const BuiltProblem p = build_problem(inline_ad);
    REQUIRE(p.differential.has_value());
    const RitzResult r = resolvent_norm(*p.problem, {-1.05, -0.1}, 2024, lanczos_options(inline_ad));
    CHECK(r.resolvent_norm == doctest::Approx(frozen::advdiff).epsilon(1e-12));

    const ProblemConfig inline_go = parse_config("[problem]\nfamily = volterra\na = 0\nb = 1\n"
                                                 "kernel = exp(-10*(s-1/3)^2 - 10*(t-1/3)^2)\n");
    const RitzResult q = resolvent_norm(*build_problem(inline_go).problem, {0.05, 0.05}, 2024);
    CHECK(q.resolvent_norm == doctest::Approx(frozen::go_a).epsilon(1e-10));

    const ProblemConfig tuned = parse_config("[problem]\npreset = advdiff\n[solver]\ndelta = 1e-3\nk_max = 7\n");
    const LanczosOptions o = lanczos_options(tuned);
    CHECK(o.delta == 1e-3);
    CHECK(o.k_max == 7);
}
