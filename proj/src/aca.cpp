#include <pscont/aca.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace pscont {

Complex BivariateKernelApprox::operator()(double s, double t) const
{
    Complex sum{};
    for (std::size_t j = 0; j < rank(); ++j)
        sum += row_factors[j](s) * col_factors[j](t);
    return sum;
}

BivariateKernelApprox BivariateKernelApprox::adjoint() const
{
    BivariateKernelApprox out;
    out.s_interval = t_interval;
    out.t_interval = s_interval;
    out.max_abs = max_abs;
    for (std::size_t j = 0; j < rank(); ++j) {
        out.row_factors.push_back(conj(col_factors[j]));
        out.col_factors.push_back(conj(row_factors[j]));
    }
    return out;
}

BivariateKernelApprox separable_kernel(const LegendreSeries& f, const LegendreSeries& g)
{
    BivariateKernelApprox out;
    out.s_interval = f.interval;
    out.t_interval = g.interval;
    out.row_factors = {f};
    out.col_factors = {g};
    return out;
}

namespace {

struct Crosses {
    std::vector<CVector> f, g; // samples at the grid nodes
    double kmax = 0.0;
};

Crosses cross_approximation(const BivariateFunction& k, const GaussRule& rule, Interval s_iv, Interval t_iv,
                            double tol, std::size_t max_rank)
{
    const std::size_t n = rule.nodes.size();
    std::vector<double> s(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = s_iv.from_reference(rule.nodes[i]);
        t[i] = t_iv.from_reference(rule.nodes[i]);
    }
    CVector e(n * n); // column major: e[i + n j] = K(s_i, t_j)
    Crosses out;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            e[i + n * j] = k(s[i], t[j]);
            out.kmax = std::max(out.kmax, std::abs(e[i + n * j]));
        }
    if (out.kmax == 0.0)
        return out;
    double scale = out.kmax; // residual entries can outgrow max |K|
    for (;;) {
        std::size_t best = 0;
        double bmax = 0.0;
        for (std::size_t idx = 0; idx < n * n; ++idx) {
            const double v = std::norm(e[idx]);
            if (v > bmax) {
                bmax = v;
                best = idx;
            }
        }
        scale = std::max(scale, std::sqrt(bmax));
        if (std::sqrt(bmax) <= tol * scale)
            break;
        if (out.f.size() >= max_rank) {
            std::ostringstream msg;
            msg << "cross approximation hit rank cap " << max_rank;
            throw ResolutionError(msg.str(), std::sqrt(bmax) / scale);
        }
        const std::size_t p = best % n, q = best / n;
        const Complex pivot = e[best];
        const double root = std::sqrt(std::abs(pivot));
        CVector f(n), g(n);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = e[i + n * q] / root;
        for (std::size_t j = 0; j < n; ++j)
            g[j] = e[p + n * j] * root / pivot;
        for (std::size_t j = 0; j < n; ++j) {
            const Complex gj = g[j];
            if (gj == Complex{})
                continue;
            Complex* colj = &e[n * j];
            for (std::size_t i = 0; i < n; ++i)
                colj[i] -= f[i] * gj;
        }
        out.f.push_back(std::move(f));
        out.g.push_back(std::move(g));
    }
    return out;
}

} // namespace

BivariateKernelApprox aca_approximate(const BivariateFunction& k, Interval s_iv, Interval t_iv, const AcaOptions& opts)
{
    if (!(s_iv.a < s_iv.b) || !(t_iv.a < t_iv.b))
        throw DomainError("kernel intervals require a < b");
    const double tol = std::max(opts.tol, 64.0 * machine_eps);
    const double pivot_tol = std::max(0.01 * tol, 8.0 * machine_eps);
    const double chop = 32.0 * machine_eps;
    auto own_max = [](const CVector& c) {
        double m = 0.0;
        for (const Complex& v : c)
            m = std::max(m, std::abs(v));
        return m;
    };
    double last_err = infinity;
    for (std::size_t n = 33; n <= opts.max_grid; n = 2 * n - 1) {
        auto rule = gauss_legendre(n);
        Crosses cr = cross_approximation(k, *rule, s_iv, t_iv, pivot_tol, opts.max_rank);
        BivariateKernelApprox out;
        out.s_interval = s_iv;
        out.t_interval = t_iv;
        out.max_abs = cr.kmax;
        if (cr.f.empty())
            return out;
        std::vector<CVector> cfs, cgs;
        std::vector<double> weight;
        double wmax = 0.0;
        for (std::size_t j = 0; j < cr.f.size(); ++j) {
            cfs.push_back(transform(cr.f[j], *rule, 0.5 * s_iv.length()));
            cgs.push_back(transform(cr.g[j], *rule, 0.5 * t_iv.length()));
            weight.push_back(own_max(cfs.back()) * own_max(cgs.back()));
            wmax = std::max(wmax, weight.back());
        }
        // tails are judged by the size of the whole cross, not the factor alone
        bool resolved = true;
        for (std::size_t j = 0; j < cr.f.size(); ++j) {
            const double rel = weight[j] > 0.0 ? wmax / weight[j] : 1.0;
            for (CVector* c : {&cfs[j], &cgs[j]}) {
                const double big = own_max(*c);
                double tail = 0.0;
                for (std::size_t i = c->size() >= 8 ? c->size() - 8 : 0; i < c->size(); ++i)
                    tail = std::max(tail, std::abs((*c)[i]));
                if (tail > 0.1 * tol * rel * big)
                    resolved = false;
                const std::size_t cut = plateau_cut(*c, chop * rel);
                if (cut != static_cast<std::size_t>(-1))
                    c->resize(std::max<std::size_t>(cut, 1));
            }
        }
        if (!resolved)
            continue;
        for (std::size_t j = 0; j < cr.f.size(); ++j) {
            out.row_factors.emplace_back(s_iv, std::move(cfs[j]));
            out.col_factors.emplace_back(t_iv, std::move(cgs[j]));
        }
        // verify away from the sampling grid
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> us(s_iv.a, s_iv.b), ut(t_iv.a, t_iv.b);
        double err = 0.0;
        for (std::size_t p = 0; p < opts.verify_points; ++p) {
            const double s = us(rng), t = ut(rng);
            err = std::max(err, std::abs(k(s, t) - out(s, t)));
        }
        last_err = err / cr.kmax;
        if (last_err <= tol)
            return out;
    }
    std::ostringstream msg;
    msg << "cross approximation unresolved on grids up to " << opts.max_grid << " (relative error " << last_err
        << ")";
    throw ResolutionError(msg.str(), last_err);
}

} // namespace pscont
