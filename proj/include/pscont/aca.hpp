#pragma once

// Low-rank approximation K(s, t) ~ sum_j f_j(s) g_j(t) by fully pivoted
// adaptive cross approximation on a Gauss–Legendre tensor grid. Sampling at
// Gauss nodes lets each cross be turned into Legendre coefficients exactly.

#include <pscont/legendre.hpp>

#include <cstdint>

namespace pscont {

using BivariateFunction = std::function<Complex(double s, double t)>;

struct BivariateKernelApprox {
    Interval s_interval;
    Interval t_interval;
    std::vector<LegendreSeries> row_factors; ///< f_j(s)
    std::vector<LegendreSeries> col_factors; ///< g_j(t)
    double max_abs = 0.0;                    ///< max |K| seen on the sampling grid

    std::size_t rank() const { return row_factors.size(); }
    Complex operator()(double s, double t) const;
    /// K*(t, s): factors swapped and conjugated.
    BivariateKernelApprox adjoint() const;
};

struct AcaOptions {
    /// Max-norm residual at random points, relative to max|K|.
    double tol = 1e-13;
    std::size_t max_rank = 200;
    std::size_t max_grid = 2049;
    std::size_t verify_points = 10000;
    std::uint64_t seed = 0x5eed;
};

BivariateKernelApprox aca_approximate(const BivariateFunction& k, Interval s_iv, Interval t_iv,
                                      const AcaOptions& opts = {});

/// Exact rank-1 kernel f(s) g(t).
BivariateKernelApprox separable_kernel(const LegendreSeries& f, const LegendreSeries& g);

} // namespace pscont
