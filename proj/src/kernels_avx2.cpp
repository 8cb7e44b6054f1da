// Compiled with -mavx2 -mfma; only reached when CPUID reports both.

#include <pscont/kernels.hpp>

#include <algorithm>
#include <cmath>

#include <immintrin.h>

namespace pscont::kernels::avx2 {

namespace {

inline const double* raw(std::span<const Complex> x) { return reinterpret_cast<const double*>(x.data()); }
inline double* raw(std::span<Complex> x) { return reinterpret_cast<double*>(x.data()); }

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

Complex dot(std::span<const Complex> x, std::span<const Complex> y)
{
    const std::size_t n = std::min(x.size(), y.size());
    const double* px = raw(x);
    const double* py = raw(y);
    // lanes hold [xr*yr, xi*yi, ...] and [xr*yi, xi*yr, ...]
    __m256d acc_re0 = _mm256_setzero_pd(), acc_re1 = _mm256_setzero_pd();
    __m256d acc_im0 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d x0 = _mm256_loadu_pd(px + 2 * k);
        const __m256d y0 = _mm256_loadu_pd(py + 2 * k);
        const __m256d x1 = _mm256_loadu_pd(px + 2 * k + 4);
        const __m256d y1 = _mm256_loadu_pd(py + 2 * k + 4);
        acc_re0 = _mm256_fmadd_pd(x0, y0, acc_re0);
        acc_re1 = _mm256_fmadd_pd(x1, y1, acc_re1);
        acc_im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), acc_im0);
        acc_im1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), acc_im1);
    }
    for (; k + 2 <= n; k += 2) {
        const __m256d x0 = _mm256_loadu_pd(px + 2 * k);
        const __m256d y0 = _mm256_loadu_pd(py + 2 * k);
        acc_re0 = _mm256_fmadd_pd(x0, y0, acc_re0);
        acc_im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), acc_im0);
    }
    const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
    // imaginary part is xr*yi - xi*yr: negate the odd lanes before summing
    const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    const __m256d acc_im = _mm256_mul_pd(_mm256_add_pd(acc_im0, acc_im1), sign);
    double re = hsum(acc_re);
    double im = hsum(acc_im);
    for (; k < n; ++k) {
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
    const double* px = raw(x);
    double* py = raw(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    // [-ai, ai, -ai, ai] multiplies the swapped pair [xi, xr]
    const __m256d ai = _mm256_set_pd(alpha.imag(), -alpha.imag(), alpha.imag(), -alpha.imag());
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = _mm256_loadu_pd(px + 2 * k);
        __m256d yv = _mm256_loadu_pd(py + 2 * k);
        yv = _mm256_fmadd_pd(ar, xv, yv);
        yv = _mm256_fmadd_pd(ai, _mm256_permute_pd(xv, 0b0101), yv);
        _mm256_storeu_pd(py + 2 * k, yv);
    }
    for (; k < n; ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        y[k] = {y[k].real() + alpha.real() * xr - alpha.imag() * xi,
                y[k].imag() + alpha.real() * xi + alpha.imag() * xr};
    }
}

double norm2(std::span<const Complex> x)
{
    const std::size_t m = 2 * x.size();
    const double* p = raw(x);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d big_v = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4)
        big_v = _mm256_max_pd(big_v, _mm256_and_pd(_mm256_loadu_pd(p + k), abs_mask));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, big_v);
    double big = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; k < m; ++k)
        big = std::max(big, std::abs(p[k]));
    if (big == 0.0 || !std::isfinite(big))
        return big;
    const double s = (big > 1e150 || big < 1e-150) ? 1.0 / big : 1.0;
    const __m256d sv = _mm256_set1_pd(s);
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    k = 0;
    for (; k + 8 <= m; k += 8) {
        const __m256d v0 = _mm256_mul_pd(_mm256_loadu_pd(p + k), sv);
        const __m256d v1 = _mm256_mul_pd(_mm256_loadu_pd(p + k + 4), sv);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; k + 4 <= m; k += 4) {
        const __m256d v0 = _mm256_mul_pd(_mm256_loadu_pd(p + k), sv);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    }
    double ssq = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < m; ++k) {
        const double v = p[k] * s;
        ssq += v * v;
    }
    return std::sqrt(ssq) / s;
}

void scale(double alpha, std::span<Complex> x)
{
    const std::size_t m = 2 * x.size();
    double* p = raw(x);
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4)
        _mm256_storeu_pd(p + k, _mm256_mul_pd(_mm256_loadu_pd(p + k), av));
    for (; k < m; ++k)
        p[k] *= alpha;
}

} // namespace pscont::kernels::avx2
