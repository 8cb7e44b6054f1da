#include <pscont/lanczos.hpp>

#include <pscont/kernels.hpp>

#include <algorithm>
#include <cmath>

namespace pscont {

std::string_view to_string(Termination t)
{
    switch (t) {
    case Termination::tolerance: return "tolerance";
    case Termination::floor: return "floor";
    case Termination::breakdown: return "breakdown";
    case Termination::max_iter: return "max_iter";
    case Termination::near_singular: return "near_singular";
    case Termination::unresolved: return "unresolved";
    }
    return "unknown";
}

Termination termination_from_string(std::string_view s)
{
    for (Termination t : {Termination::tolerance, Termination::floor, Termination::breakdown, Termination::max_iter,
                          Termination::near_singular, Termination::unresolved})
        if (to_string(t) == s)
            return t;
    throw DomainError("unknown termination flag '" + std::string(s) + "'");
}

namespace {

// y += alpha * x, growing y to the length of x
void grow_axpy(Complex alpha, const CVector& x, CVector& y)
{
    if (y.size() < x.size())
        y.resize(x.size());
    kernels::axpy(alpha, x, y);
}

std::size_t sturm_count(std::span<const double> a, std::span<const double> b, double x)
{
    std::size_t count = 0;
    double d = 1.0;
    const double tiny = 1e-300;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double off = i > 0 ? b[i - 1] * b[i - 1] : 0.0;
        d = a[i] - x - (i > 0 ? off / d : 0.0);
        if (d == 0.0)
            d = -tiny;
        if (d < 0.0)
            ++count;
    }
    return count;
}

// Solve (H - mu I) x = rhs with partial pivoting; zero pivots nudged.
void shifted_tridiagonal_solve(std::span<const double> a, std::span<const double> b, double mu, std::vector<double>& x)
{
    const std::size_t n = a.size();
    std::vector<double> d(n), dl(n > 1 ? n - 1 : 0), du(dl.size()), du2(n > 2 ? n - 2 : 0);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a[i] - mu;
        scale = std::max(scale, std::abs(a[i]) + (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i + 1 < n ? std::abs(b[i]) : 0.0));
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        dl[i] = du[i] = b[i];
    const double tiny = machine_eps * std::max(scale, 1e-300);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0)
                d[i] = tiny;
            const double f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            if (i + 2 < n)
                du2[i] = 0.0;
            x[i + 1] -= f * x[i];
        } else {
            const double f = d[i] / dl[i];
            d[i] = dl[i];
            const double tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - f * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du[i + 1];
            }
            std::swap(x[i], x[i + 1]);
            x[i + 1] -= f * x[i];
        }
    }
    if (d[n - 1] == 0.0)
        d[n - 1] = tiny;
    x[n - 1] /= d[n - 1];
    if (n > 1)
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
}

} // namespace

std::pair<double, double> largest_ritz(std::span<const double> alphas, std::span<const double> betas)
{
    const std::size_t k = alphas.size();
    if (k == 0)
        throw DomainError("empty tridiagonal matrix");
    if (k == 1)
        return {alphas[0], 1.0};
    double lo = infinity, hi = -infinity;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = (i > 0 ? std::abs(betas[i - 1]) : 0.0) + (i + 1 < k ? std::abs(betas[i]) : 0.0);
        lo = std::min(lo, alphas[i] - r);
        hi = std::max(hi, alphas[i] + r);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (sturm_count(alphas, betas, mid) == k)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 2.0 * machine_eps * std::max(std::abs(lo), std::abs(hi)))
            break;
    }
    const double mu = 0.5 * (lo + hi);
    std::vector<double> y(k, 1.0 / std::sqrt(static_cast<double>(k)));
    for (int it = 0; it < 3; ++it) {
        shifted_tridiagonal_solve(alphas, betas, mu, y);
        double nrm = 0.0;
        for (double v : y)
            nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : y)
            v /= nrm;
    }
    return {mu, std::abs(y.back())};
}

void lanczos_step(ResolventApplicator& t, LanczosState& s, bool reorthogonalize)
{
    CVector p = t.apply(s.u_curr);
    if (s.k > 0)
        grow_axpy(-s.betas.back(), s.u_prev, p);
    const double alpha = t.inner(s.u_curr, p).real();
    grow_axpy(-alpha, s.u_curr, p);
    if (reorthogonalize) {
        if (s.basis.empty())
            s.basis.push_back(s.u_curr);
        for (int pass = 0; pass < 2; ++pass)
            for (const CVector& q : s.basis)
                grow_axpy(-t.inner(q, p), q, p);
    }
    const double beta = t.norm(p);
    if (beta > 0.0)
        kernels::scale(1.0 / beta, p);
    s.alphas.push_back(alpha);
    s.betas.push_back(beta);
    s.u_prev = std::move(s.u_curr);
    s.u_curr = std::move(p);
    if (reorthogonalize)
        s.basis.push_back(s.u_curr);
    ++s.k;
}

RitzResult resolvent_norm(ResolventApplicator& t, std::span<const Complex> u1, const LanczosOptions& opts)
{
    RitzResult res;
    LanczosState s;
    s.u_curr.assign(u1.begin(), u1.end());
    try {
        for (std::size_t k = 1; k <= opts.k_max; ++k) {
            lanczos_step(t, s, opts.reorthogonalize);
            auto [mu, y] = largest_ritz(s.alphas, std::span<const double>(s.betas).first(k - 1));
            res.mu = mu;
            res.y_last = y;
            res.iterations = k;
            res.mu_history.push_back(mu);
            const double beta = s.betas.back();
            const double floor = opts.c_l * machine_eps * std::pow(mu, 1.5);
            const double tol = opts.delta * mu;
            res.gap = beta * y - std::max(floor, tol);
            if (beta < machine_eps * std::sqrt(mu)) {
                res.termination = Termination::breakdown;
                break;
            }
            if (res.gap < 0.0) {
                res.termination = floor >= tol ? Termination::floor : Termination::tolerance;
                break;
            }
            res.termination = Termination::max_iter;
        }
        res.resolvent_norm = std::sqrt(std::max(res.mu, 0.0));
    } catch (const NearSingularError&) {
        res.termination = Termination::near_singular;
        res.resolvent_norm = infinity;
    } catch (const ResolutionError&) {
        res.termination = Termination::unresolved;
        res.resolvent_norm = res.iterations > 0 ? std::sqrt(std::max(res.mu, 0.0)) : std::nan("");
    }
    res.dof = t.max_dof();
    return res;
}

RitzResult resolvent_norm(const Problem& problem, Complex z, std::uint64_t seed, const LanczosOptions& opts)
{
    std::unique_ptr<ResolventApplicator> t;
    try {
        t = problem.at(z, opts.solve);
    } catch (const NearSingularError&) {
        RitzResult res;
        res.termination = Termination::near_singular;
        res.resolvent_norm = infinity;
        return res;
    }
    const CVector u1 = problem.start_vector(seed);
    return resolvent_norm(*t, u1, opts);
}

} // namespace pscont
