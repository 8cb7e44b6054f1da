#include <pscont/kernels.hpp>

#include <atomic>
#include <cstdlib>
#include <string>

namespace pscont::kernels {

namespace {

bool detect_avx2()
{
#if defined(PSCONT_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend initial_backend()
{
    const bool have = detect_avx2();
    if (const char* env = std::getenv("PSCONT_SIMD")) {
        const std::string v(env);
        if (v == "scalar")
            return Backend::scalar;
        if (v == "avx2" && have)
            return Backend::avx2;
    }
    return have ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot()
{
    static std::atomic<Backend> slot{initial_backend()};
    return slot;
}

} // namespace

bool avx2_available()
{
    static const bool have = detect_avx2();
    return have;
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend backend)
{
    if (backend == Backend::avx2 && !avx2_available())
        backend = Backend::scalar;
    backend_slot().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend)
{
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

#if defined(PSCONT_HAVE_AVX2_KERNELS)
#define PSCONT_DISPATCH(fn, ...)                                                                   \
    (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define PSCONT_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

Complex dot(std::span<const Complex> x, std::span<const Complex> y) { return PSCONT_DISPATCH(dot, x, y); }
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) { PSCONT_DISPATCH(axpy, alpha, x, y); }
double norm2(std::span<const Complex> x) { return PSCONT_DISPATCH(norm2, x); }
void scale(double alpha, std::span<Complex> x) { PSCONT_DISPATCH(scale, alpha, x); }

#undef PSCONT_DISPATCH

} // namespace pscont::kernels
