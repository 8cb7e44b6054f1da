#pragma once

// Series in normalized Legendre polynomials p_k on an interval [a, b]:
//   p_k(x) = sqrt(2/(b-a)) * sqrt(k + 1/2) * P_k(t),  t = (2x - a - b)/(b - a).
// The family is orthonormal in L2([a, b]), so norms and inner products of
// series are plain coefficient-vector norms and dot products.

#include <pscont/types.hpp>

#include <functional>
#include <memory>
#include <span>

namespace pscont {

struct LegendreSeries {
    Interval interval;
    CVector coeffs;

    LegendreSeries() = default;
    explicit LegendreSeries(Interval iv, CVector c = {});

    std::size_t size() const { return coeffs.size(); }
    bool empty() const { return coeffs.empty(); }
    /// Degree of the last stored coefficient; -1 for the zero series.
    long degree() const { return static_cast<long>(coeffs.size()) - 1; }
    Complex coeff(std::size_t k) const { return k < coeffs.size() ? coeffs[k] : Complex{}; }

    /// Drop trailing exact zeros.
    LegendreSeries& trim();
    /// Drop trailing coefficients with |c_k| <= tol * max|c|.
    LegendreSeries& chop(double tol);

    double norm() const;
    Complex operator()(double x) const;

    static LegendreSeries constant(Interval iv, Complex c);
    /// The function x on [a, b].
    static LegendreSeries identity(Interval iv);
    /// The single basis polynomial p_k.
    static LegendreSeries basis(Interval iv, std::size_t k);
};

LegendreSeries operator+(const LegendreSeries& u, const LegendreSeries& v);
LegendreSeries operator-(const LegendreSeries& u, const LegendreSeries& v);
LegendreSeries operator-(const LegendreSeries& u);
LegendreSeries operator*(Complex alpha, const LegendreSeries& u);
LegendreSeries conj(const LegendreSeries& u);

/// Gauss–Legendre rule on [-1, 1]. Rules are built once per size and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
std::shared_ptr<const GaussRule> gauss_legendre(std::size_t n);

/// Values p_0(t) .. p_{n-1}(t) of the normalized Legendre family on [-1, 1].
void legendre_values(double t, std::span<double> out);

/// Clenshaw evaluation on the reference interval (no interval scaling).
Complex clenshaw_reference(std::span<const Complex> coeffs, double t);

/// Evaluate at x in [a, b]; DomainError outside.
Complex evaluate(const LegendreSeries& s, double x);

/// Coefficients of the degree n-1 interpolant at n Gauss–Legendre nodes.
CVector transform(std::span<const Complex> samples, const GaussRule& rule, double half_length);

using ScalarFunction = std::function<Complex(double)>;

struct ApproxOptions {
    double tol = 0.0; ///< relative; 0 means machine precision
    std::size_t max_size = 65536;
};

/// Adaptive construction: sample at 17, 33, 65, ... Gauss nodes until a run of
/// 8 consecutive coefficients falls below tol * max|c|, then chop there.
/// ResolutionError (carrying the last tail magnitude) past max_size.
LegendreSeries approximate(const ScalarFunction& f, Interval iv, ApproxOptions opts = {});
LegendreSeries approximate(const ScalarFunction& f, Interval iv, double tol);

/// Index where the plateau rule cuts, or npos if no run of 8 small entries.
std::size_t plateau_cut(std::span<const Complex> c, double tol);

/// sum conj(u_k) v_k; DomainError on interval mismatch.
Complex inner(const LegendreSeries& u, const LegendreSeries& v);

/// Exact derivative of the series.
LegendreSeries derivative(const LegendreSeries& u, int order = 1);

/// Definite integral over the interval.
Complex integral(const LegendreSeries& u);

} // namespace pscont
