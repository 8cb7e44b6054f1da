#include <pscont/kernels.hpp>

#include <algorithm>
#include <cmath>

namespace pscont::kernels::scalar {

Complex dot(std::span<const Complex> x, std::span<const Complex> y)
{
    const std::size_t n = std::min(x.size(), y.size());
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        const double yr = y[k].real(), yi = y[k].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y)
{
    const std::size_t n = std::min(x.size(), y.size());
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t k = 0; k < n; ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        y[k] = {y[k].real() + ar * xr - ai * xi, y[k].imag() + ar * xi + ai * xr};
    }
}

double norm2(std::span<const Complex> x)
{
    double big = 0.0;
    for (const Complex& c : x)
        big = std::max({big, std::abs(c.real()), std::abs(c.imag())});
    if (big == 0.0 || !std::isfinite(big))
        return big;
    // rescale only when squaring could leave the normal range
    const double s = (big > 1e150 || big < 1e-150) ? 1.0 / big : 1.0;
    double ssq = 0.0;
    for (const Complex& c : x) {
        const double r = c.real() * s, i = c.imag() * s;
        ssq += r * r + i * i;
    }
    return std::sqrt(ssq) / s;
}

void scale(double alpha, std::span<Complex> x)
{
    for (Complex& c : x)
        c *= alpha;
}

} // namespace pscont::kernels::scalar
