#pragma once

// Complex vector kernels used on the hot paths (Householder updates, Lanczos
// recurrences). Every kernel has a portable scalar reference and an AVX2/FMA
// variant; the variant is chosen once at startup from CPUID and can be
// overridden with PSCONT_SIMD=scalar|avx2 or set_backend().

#include <pscont/types.hpp>

#include <span>
#include <string_view>

namespace pscont::kernels {

enum class Backend { scalar, avx2 };

/// Backend currently used by the dispatching entry points.
Backend active_backend();
/// Force a backend. Requesting avx2 on a CPU without it falls back to scalar.
void set_backend(Backend backend);
bool avx2_available();
std::string_view backend_name(Backend backend);

/// sum_k conj(x_k) * y_k over the common length.
Complex dot(std::span<const Complex> x, std::span<const Complex> y);
/// y += alpha * x
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
/// Euclidean norm, overflow-safe.
double norm2(std::span<const Complex> x);
/// x *= alpha (real)
void scale(double alpha, std::span<Complex> x);

namespace scalar {
Complex dot(std::span<const Complex> x, std::span<const Complex> y);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
double norm2(std::span<const Complex> x);
void scale(double alpha, std::span<Complex> x);
} // namespace scalar

namespace avx2 {
Complex dot(std::span<const Complex> x, std::span<const Complex> y);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
double norm2(std::span<const Complex> x);
void scale(double alpha, std::span<Complex> x);
} // namespace avx2

} // namespace pscont::kernels
