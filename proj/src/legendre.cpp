#include <pscont/legendre.hpp>

#include <pscont/kernels.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace pscont {

namespace {

void check_same_interval(const LegendreSeries& u, const LegendreSeries& v)
{
    if (!(u.interval == v.interval))
        throw DomainError("series live on different intervals");
}

// p_{k+1} = (t p_k - a_{k-1} p_{k-1}) / a_k for the normalized family
inline double jacobi_a(std::size_t k)
{
    const double kk = static_cast<double>(k);
    return (kk + 1.0) / std::sqrt((2.0 * kk + 1.0) * (2.0 * kk + 3.0));
}

GaussRule build_rule(std::size_t n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = nn * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-17)
                break;
        }
        {
            // one more evaluation at the converged node for the weight
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = nn * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

LegendreSeries::LegendreSeries(Interval iv, CVector c) : interval(iv), coeffs(std::move(c))
{
    if (!(iv.a < iv.b))
        throw DomainError("interval requires a < b");
}

LegendreSeries& LegendreSeries::trim()
{
    while (!coeffs.empty() && coeffs.back() == Complex{})
        coeffs.pop_back();
    return *this;
}

LegendreSeries& LegendreSeries::chop(double tol)
{
    double big = 0.0;
    for (const Complex& c : coeffs)
        big = std::max(big, std::abs(c));
    while (!coeffs.empty() && std::abs(coeffs.back()) <= tol * big)
        coeffs.pop_back();
    return *this;
}

double LegendreSeries::norm() const { return kernels::norm2(coeffs); }

Complex LegendreSeries::operator()(double x) const { return evaluate(*this, x); }

LegendreSeries LegendreSeries::constant(Interval iv, Complex c)
{
    if (c == Complex{})
        return LegendreSeries(iv);
    // 1 = sqrt(b-a) p_0
    return LegendreSeries(iv, {c * std::sqrt(iv.length())});
}

LegendreSeries LegendreSeries::identity(Interval iv)
{
    // x = mid + half * t,  t = sqrt(2/3) P-normalized p_1 on [-1, 1]
    const double root = std::sqrt(iv.length());
    const double mid = 0.5 * (iv.a + iv.b);
    const double half = 0.5 * iv.length();
    LegendreSeries s(iv, {mid * root, half * root / std::sqrt(3.0)});
    return s.trim();
}

LegendreSeries LegendreSeries::basis(Interval iv, std::size_t k)
{
    CVector c(k + 1);
    c[k] = 1.0;
    return LegendreSeries(iv, std::move(c));
}

LegendreSeries operator+(const LegendreSeries& u, const LegendreSeries& v)
{
    check_same_interval(u, v);
    LegendreSeries out(u.interval, CVector(std::max(u.size(), v.size())));
    for (std::size_t k = 0; k < out.size(); ++k)
        out.coeffs[k] = u.coeff(k) + v.coeff(k);
    return out;
}

LegendreSeries operator-(const LegendreSeries& u, const LegendreSeries& v) { return u + (-v); }

LegendreSeries operator-(const LegendreSeries& u) { return Complex(-1.0) * u; }

LegendreSeries operator*(Complex alpha, const LegendreSeries& u)
{
    LegendreSeries out = u;
    for (Complex& c : out.coeffs)
        c *= alpha;
    return out;
}

LegendreSeries conj(const LegendreSeries& u)
{
    LegendreSeries out = u;
    for (Complex& c : out.coeffs)
        c = std::conj(c);
    return out;
}

std::shared_ptr<const GaussRule> gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw DomainError("Gauss rule needs at least one node");
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const GaussRule>> cache;
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(n);
        if (it != cache.end())
            return it->second;
    }
    auto rule = std::make_shared<const GaussRule>(build_rule(n));
    std::lock_guard lock(mutex);
    return cache.emplace(n, std::move(rule)).first->second;
}

void legendre_values(double t, std::span<double> out)
{
    if (out.empty())
        return;
    out[0] = std::numbers::sqrt2 / 2.0;
    if (out.size() == 1)
        return;
    out[1] = t * out[0] / jacobi_a(0);
    for (std::size_t k = 1; k + 1 < out.size(); ++k)
        out[k + 1] = (t * out[k] - jacobi_a(k - 1) * out[k - 1]) / jacobi_a(k);
}

Complex clenshaw_reference(std::span<const Complex> c, double t)
{
    const std::size_t n = c.size();
    if (n == 0)
        return {};
    Complex b1{}, b2{};
    for (std::size_t k = n; k-- > 0;) {
        const double ak = jacobi_a(k);
        const Complex bk = c[k] + (t / ak) * b1 - (ak / jacobi_a(k + 1)) * b2;
        b2 = b1;
        b1 = bk;
    }
    return b1 * (std::numbers::sqrt2 / 2.0);
}

Complex evaluate(const LegendreSeries& s, double x)
{
    const Interval& iv = s.interval;
    if (!(x >= iv.a && x <= iv.b)) {
        std::ostringstream msg;
        msg << "evaluation point " << x << " outside [" << iv.a << ", " << iv.b << "]";
        throw DomainError(msg.str());
    }
    const double t = std::clamp(iv.to_reference(x), -1.0, 1.0);
    return clenshaw_reference(s.coeffs, t) * std::sqrt(2.0 / iv.length());
}

CVector transform(std::span<const Complex> samples, const GaussRule& rule, double half_length)
{
    const std::size_t n = rule.nodes.size();
    CVector c(n);
    std::vector<double> p(n);
    const double scale = std::sqrt(half_length);
    for (std::size_t i = 0; i < n; ++i) {
        legendre_values(rule.nodes[i], p);
        const Complex wf = rule.weights[i] * samples[i] * scale;
        for (std::size_t k = 0; k < n; ++k)
            c[k] += wf * p[k];
    }
    return c;
}

std::size_t plateau_cut(std::span<const Complex> c, double tol)
{
    constexpr std::size_t run = 8;
    double big = 0.0;
    for (const Complex& v : c)
        big = std::max(big, std::abs(v));
    if (big == 0.0)
        return 0;
    const double thresh = tol * big;
    std::size_t count = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        count = std::abs(c[k]) < thresh ? count + 1 : 0;
        if (count == run)
            return k + 1 - run;
    }
    return static_cast<std::size_t>(-1);
}

LegendreSeries approximate(const ScalarFunction& f, Interval iv, ApproxOptions opts)
{
    if (!(iv.a < iv.b))
        throw DomainError("interval requires a < b");
    // roundoff in the discrete transform sits near a few eps times max|c|
    const double tol = std::max(opts.tol, 32.0 * machine_eps);
    double last_tail = infinity;
    for (std::size_t n = 17;; n = 2 * n - 1) {
        const std::size_t m = std::min(n, opts.max_size);
        auto rule = gauss_legendre(m);
        CVector samples(m);
        for (std::size_t i = 0; i < m; ++i)
            samples[i] = f(iv.from_reference(rule->nodes[i]));
        CVector c = transform(samples, *rule, 0.5 * iv.length());
        const std::size_t cut = plateau_cut(c, tol);
        if (cut != static_cast<std::size_t>(-1)) {
            c.resize(cut);
            LegendreSeries s(iv, std::move(c));
            return s.trim();
        }
        double big = 0.0, tail = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            big = std::max(big, std::abs(c[k]));
            if (k + 8 >= m)
                tail = std::max(tail, std::abs(c[k]));
        }
        last_tail = big > 0.0 ? tail / big : 0.0;
        if (m >= opts.max_size)
            break;
    }
    std::ostringstream msg;
    msg << "approximate: no coefficient plateau up to degree " << opts.max_size << " (relative tail "
        << last_tail << ")";
    throw ResolutionError(msg.str(), last_tail);
}

LegendreSeries approximate(const ScalarFunction& f, Interval iv, double tol)
{
    return approximate(f, iv, ApproxOptions{tol});
}

Complex inner(const LegendreSeries& u, const LegendreSeries& v)
{
    check_same_interval(u, v);
    return kernels::dot(u.coeffs, v.coeffs);
}

LegendreSeries derivative(const LegendreSeries& u, int order)
{
    LegendreSeries out = u;
    const double jac = 2.0 / u.interval.length();
    for (int d = 0; d < order; ++d) {
        const std::size_t n = out.size();
        if (n <= 1) {
            out.coeffs.clear();
            break;
        }
        CVector hat(n);
        for (std::size_t k = 0; k < n; ++k)
            hat[k] = out.coeffs[k] * std::sqrt(static_cast<double>(k) + 0.5);
        CVector res(n - 1);
        // S_k = sum of hat_m over m > k with m - k odd
        Complex s_next{}, s_next2{};
        for (std::size_t k = n - 1; k-- > 0;) {
            const Complex sk = hat[k + 1] + s_next2;
            const double kk = static_cast<double>(k);
            res[k] = jac * (2.0 * kk + 1.0) * sk / std::sqrt(kk + 0.5);
            s_next2 = s_next;
            s_next = sk;
        }
        out.coeffs = std::move(res);
    }
    return out;
}

Complex integral(const LegendreSeries& u) { return u.coeff(0) * std::sqrt(u.interval.length()); }

} // namespace pscont
