#include <doctest.h>

#include <pscont/kernels.hpp>
#include <pscont/spectral.hpp>

#include "oracles/oracles.hpp"
#include "support.hpp"

#include <cmath>

using namespace pscont;

namespace {

double double_factorial(int m)
{
    double r = 1.0;
    for (int k = m; k > 1; k -= 2)
        r *= k;
    return r;
}

/// sum c_n C^(N+1/2)_n(t) through C^(N+1/2)_n = P^(N)_{n+N} / (2N-1)!!; N = 0 means
/// normalized Legendre on iv.
Complex ultraspherical_value(std::span<const Complex> c, int order, Interval iv, double x)
{
    const double t = iv.to_reference(x);
    const auto d = oracle::legendre_derivatives(t, c.size() + order, order);
    Complex s{};
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (order == 0)
            s += c[n] * std::sqrt(2.0 / iv.length()) * std::sqrt(n + 0.5) * d[0][n];
        else
            s += c[n] * d[order][n + order] / double_factorial(2 * order - 1);
    }
    return s;
}

CVector apply_to(const ColumnOperator& a, const CVector& x) { return a.apply(x); }

class RandomBand final : public ColumnOperator {
public:
    RandomBand(std::uint64_t seed, std::size_t lo, std::size_t up) : seed_(seed), lo_(lo), up_(up) {}
    void column(std::size_t j, SparseColumn& out) const override
    {
        out.first = j >= up_ ? j - up_ : 0;
        out.values.clear();
        for (std::size_t i = out.first; i <= j + lo_; ++i) {
            testgen::Gen g(seed_ + 31 * i + 1009 * j);
            out.values.push_back(g.complex());
        }
    }
    std::size_t lower_bandwidth() const override { return lo_; }
    std::size_t upper_bandwidth() const override { return up_; }

private:
    std::uint64_t seed_;
    std::size_t lo_, up_;
};

} // namespace

TEST_CASE("differentiation lands in the right ultraspherical basis")
{
    for (std::size_t c = 0; c < 100; ++c) {
        testgen::Gen g(c);
        const Interval iv = g.interval();
        const LegendreSeries u(iv, g.vector(g.index(1, 25), 0.8));
        const int k = static_cast<int>(g.index(1, 4));
        const CVector du = apply_to(*differentiation_matrix(k, iv), u.coeffs);
        const double x = g.uniform(iv.a, iv.b);
        const Complex ref = derivative(u, k)(x);
        CHECK(std::abs(ultraspherical_value(du, k, iv, x) - ref) <= 1e-11 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("conversion preserves the function")
{
    for (std::size_t c = 0; c < 100; ++c) {
        testgen::Gen g(300 + c);
        const Interval iv = g.interval();
        const LegendreSeries u(iv, g.vector(g.index(1, 25), 0.8));
        const int n = static_cast<int>(g.index(1, 4));
        const CVector cu = apply_to(*conversion_chain(0, n, iv), u.coeffs);
        const double x = g.uniform(iv.a, iv.b);
        CHECK(std::abs(ultraspherical_value(cu, n, iv, x) - u(x)) <= 1e-12 * (1.0 + std::abs(u(x))));
    }
}

TEST_CASE("multiplication by a series")
{
    for (std::size_t c = 0; c < 100; ++c) {
        testgen::Gen g(600 + c);
        const Interval iv = g.interval();
        const LegendreSeries f(iv, g.vector(g.index(1, 10), 0.7));
        const LegendreSeries u(iv, g.vector(g.index(1, 20), 0.8));
        const int n = static_cast<int>(g.index(0, 3));
        const double x = g.uniform(iv.a, iv.b);
        const Complex ref = f(x) * u(x);
        CVector cu = apply_to(*conversion_chain(0, n, iv), u.coeffs);
        const CVector fu = apply_to(*multiplication_matrix(f, n + 0.5), cu);
        CHECK(std::abs(ultraspherical_value(fu, n, iv, x) - ref) <= 1e-12 * (1.0 + std::abs(ref)));
        if (n == 0)
            CHECK(std::abs(multiply(f, u)(x) - ref) <= 1e-12 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("integration matrices")
{
    for (std::size_t c = 0; c < 100; ++c) {
        testgen::Gen g(900 + c);
        const Interval iv = g.interval();
        const LegendreSeries u(iv, g.vector(g.index(1, 20), 0.8));
        const LegendreSeries left(iv, apply_to(*integration_matrix(iv), u.coeffs));
        const LegendreSeries right(iv, apply_to(*right_integration_matrix(iv), u.coeffs));
        const double x = g.uniform(iv.a, iv.b);
        const oracle::Rule r = oracle::gauss(30, iv.a, x);
        Complex ref{};
        for (std::size_t q = 0; q < r.x.size(); ++q)
            ref += r.w[q] * u(r.x[q]);
        const double scale = 1.0 + u.norm() * std::sqrt(iv.length());
        CHECK(std::abs(left(x) - ref) <= 1e-13 * scale);
        CHECK(std::abs(right(x) - (integral(u) - ref)) <= 1e-13 * scale);
        CHECK(std::abs(left(iv.a)) <= 1e-13 * scale);
    }
}

TEST_CASE("combinators and conjugate transpose against dense products")
{
    for (std::size_t c = 0; c < 100; ++c) {
        testgen::Gen g(1200 + c);
        auto a = std::make_shared<RandomBand>(g.next(), g.index(0, 3), g.index(0, 3));
        auto b = std::make_shared<RandomBand>(g.next(), g.index(0, 3), g.index(0, 3));
        const Complex s = g.complex(), t = g.complex();
        const auto comb = linear_combination({{s, a}, {t, b}});
        const auto prod = product({a, b});
        const auto at = conjugate_transpose(cached(a));
        CHECK(at->lower_bandwidth() == a->upper_bandwidth());
        CHECK(at->upper_bandwidth() == a->lower_bandwidth());
        for (std::size_t i = 0; i < 12; ++i)
            for (std::size_t j = 0; j < 12; ++j) {
                CHECK(std::abs(comb->entry(i, j) - (s * a->entry(i, j) + t * b->entry(i, j))) < 1e-14);
                Complex p{};
                for (std::size_t m = 0; m < 24; ++m)
                    p += a->entry(i, m) * b->entry(m, j);
                CHECK(std::abs(prod->entry(i, j) - p) < 1e-13);
                CHECK(at->entry(i, j) == std::conj(a->entry(j, i)));
            }
    }
}

TEST_CASE("low-rank, identity and cache")
{
    const auto lr = low_rank({CVector{1.0, 2.0}}, {CVector{Complex(0, 1), 3.0}});
    CHECK(lr->entry(1, 0) == Complex(0, 2));
    CHECK(lr->entry(0, 1) == Complex(3.0));
    CHECK(lr->entry(5, 5) == Complex{});
    const auto id = identity_operator(2.5);
    CHECK(id->entry(7, 7) == Complex(2.5));
    CHECK(id->entry(7, 6) == Complex{});
    auto a = std::make_shared<RandomBand>(3, 2, 1);
    const auto c = cached(a);
    for (std::size_t j = 0; j < 10; ++j)
        CHECK(c->entry(j + 1, j) == a->entry(j + 1, j));
}

TEST_CASE("recombined basis satisfies the boundary functionals")
{
    using Side = BoundaryFunctional::Side;
    const Interval iv{0.0, 2.0};
    const std::vector<std::vector<BoundaryFunctional>> sets = {
        {BoundaryFunctional::value(Side::right)},
        {BoundaryFunctional::value(Side::left), BoundaryFunctional::value(Side::right)},
        {BoundaryFunctional::value(Side::left), BoundaryFunctional::value(Side::right),
         BoundaryFunctional::value(Side::left, 1), BoundaryFunctional::value(Side::right, 1)},
    };
    for (const auto& bcs : sets) {
        RecombinedBasis basis(bcs, iv);
        for (std::size_t k = 0; k < 30; ++k) {
            SparseColumn col;
            basis.column(k, col);
            CHECK(std::abs(kernels::norm2(col.values) - 1.0) < 1e-13);
            const LegendreSeries phi(iv, apply_to(basis, [&] {
                                         CVector e(k + 1);
                                         e[k] = 1.0;
                                         return e;
                                     }()));
            for (const BoundaryFunctional& f : bcs) {
                const auto& term = f.terms[0];
                const double x = term.side == Side::left ? iv.a : iv.b;
                const Complex v = term.derivative == 0 ? phi(x) : derivative(phi, term.derivative)(x);
                CHECK(std::abs(v) < 1e-11 * (1.0 + k * k));
            }
        }
    }
    CHECK(legendre_endpoint_derivative(3, 0, true, Interval{-1, 1}) == doctest::Approx(std::sqrt(3.5)));
    CHECK(legendre_endpoint_derivative(3, 0, false, Interval{-1, 1}) == doctest::Approx(-std::sqrt(3.5)));
}

TEST_CASE("assembled differential operator matches apply")
{
    for (std::size_t c = 0; c < 100; ++c) {
        testgen::Gen g(1500 + c);
        const Interval iv = g.interval();
        DifferentialExpression tau;
        tau.interval = iv;
        const int order = static_cast<int>(g.index(1, 4));
        for (int k = 0; k <= order; ++k)
            tau.coeffs.push_back(LegendreSeries(iv, g.vector(g.index(1, 4), 0.5)));
        const LegendreSeries u(iv, g.vector(g.index(1, 20), 0.8));
        const CVector tu = apply_to(*assemble(tau, order), u.coeffs);
        const double x = g.uniform(iv.a, iv.b);
        const Complex ref = tau.apply(u)(x);
        CHECK(tau.order() == order);
        CHECK(std::abs(ultraspherical_value(tu, order, iv, x) - ref) <= 1e-10 * (1.0 + std::abs(ref)));
    }
}
