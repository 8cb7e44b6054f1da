#include "properties.hpp"

#include "../oracles/oracles.hpp"
#include "../support.hpp"

#include <pscont/grid.hpp>
#include <pscont/kernels.hpp>
#include <pscont/presets.hpp>

#include <cmath>
#include <functional>
#include <sstream>

namespace props {

using namespace pscont;
using testgen::Gen;

namespace {

void record(Outcome& o, double violation, std::size_t c, const std::string& what)
{
    ++o.cases;
    o.worst = std::max(o.worst, violation);
    if (!(violation <= 1.0)) {
        if (o.failures == 0) {
            std::ostringstream s;
            s << "case " << c << ": " << what << " (violation " << violation << ")";
            o.first_failure = s.str();
        }
        ++o.failures;
    }
}

struct Case {
    const char* name;
    ProblemPtr problem;
    double re0, re1, im0, im1; ///< box of shifts away from the spectrum
};

const std::vector<Case>& problems()
{
    static const std::vector<Case> list = [] {
        std::vector<Case> v;
        v.push_back({"advdiff", make_preset("advdiff").problem, 0.2, 2.0, -2.0, 2.0});
        v.push_back({"first-derivative", make_preset("first-derivative").problem, -4.0, -0.5, -5.0, 5.0});
        v.push_back({"go", make_preset("go").problem, 0.02, 0.3, -0.2, 0.2});
        PresetParameters p;
        p.d = 3.0;
        v.push_back({"wiener-hopf d=3", make_preset("wiener-hopf", p).problem, 0.3, 1.5, 0.2, 1.0});
        v.push_back({"volterra-integration", make_preset("volterra-integration").problem, 0.2, 1.0, 0.2, 1.0});
        v.push_back({"orr-sommerfeld", make_preset("orr-sommerfeld").problem, -0.3, 0.0, -0.4, -0.1});
        v.push_back({"orr-sommerfeld-energy", make_preset("orr-sommerfeld-energy").problem, -0.3, 0.0, -0.4, -0.1});
        const Interval iv{-1.0, 2.0};
        FredholmSpec f;
        f.kernel = aca_approximate([](double s, double t) { return Complex(std::cos(s * t), 0.3 * s - t); }, iv, iv);
        f.scale = Complex(0.5, 0.25);
        v.push_back({"fredholm cos(st)", build_fredholm(f), 1.5, 3.0, -1.0, 1.0});
        return v;
    }();
    return list;
}

Complex random_shift(Gen& g, const Case& c) { return {g.uniform(c.re0, c.re1), g.uniform(c.im0, c.im1)}; }

/// Random vector in the problem's admissible space.
CVector random_input(const Problem& p, std::uint64_t seed) { return p.start_vector(seed); }

class RandomBanded final : public ColumnOperator {
public:
    RandomBanded(std::uint64_t seed, std::size_t lower, std::size_t upper) : seed_(seed), lo_(lower), up_(upper) {}
    void column(std::size_t j, SparseColumn& out) const override
    {
        out.first = j >= up_ ? j - up_ : 0;
        out.values.clear();
        for (std::size_t i = out.first; i <= j + lo_; ++i)
            out.values.push_back(entry_of(i, j));
    }
    std::size_t lower_bandwidth() const override { return lo_; }
    std::size_t upper_bandwidth() const override { return up_; }
    double diag_scale(std::size_t n) const { return 2.0 + static_cast<double>(n); }

private:
    Complex entry_of(std::size_t i, std::size_t j) const
    {
        Gen g(seed_ ^ (i * 1000003ull + j * 7919ull));
        const Complex r = g.complex();
        if (i == j)
            return (2.0 + static_cast<double>(i)) * std::polar(1.0, g.uniform(-0.5, 0.5)) + r;
        return r;
    }
    std::uint64_t seed_;
    std::size_t lo_, up_;
};

} // namespace

Outcome coefficient_isometry(std::size_t cases)
{
    Outcome o;
    for (std::size_t c = 0; c < cases; ++c) {
        Gen g(1000 + c);
        const Interval iv = g.interval();
        const std::size_t n = g.index(1, 40);
        const LegendreSeries u(iv, g.vector(n, g.uniform(0.5, 1.0)));
        const LegendreSeries v(iv, g.vector(g.index(1, 40), g.uniform(0.5, 1.0)));
        const oracle::Rule r = oracle::gauss(50, iv.a, iv.b);
        double uu = 0.0;
        Complex uv{};
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            const Complex a = u(r.x[q]), b = v(r.x[q]);
            uu += r.w[q] * std::norm(a);
            uv += r.w[q] * std::conj(a) * b;
        }
        const double e1 = std::abs(u.norm() - std::sqrt(uu)) / std::sqrt(uu);
        const double e2 = std::abs(inner(u, v) - uv) / (u.norm() * v.norm());
        record(o, std::max(e1, e2) / 1e-13, c, "norm or inner product mismatch");
    }
    return o;
}

Outcome adjoint_pairing(std::size_t cases)
{
    Outcome o;
    const auto& list = problems();
    for (std::size_t c = 0; c < cases; ++c) {
        Gen g(2000 + c);
        const Case& pc = list[c % list.size()];
        const Complex z = random_shift(g, pc);
        auto t = pc.problem->at(z);
        const CVector u = random_input(*pc.problem, g.next());
        const CVector v = random_input(*pc.problem, g.next());
        const CVector ru = t->forward(u);
        const CVector rsv = t->adjoint(v);
        const Complex a = t->inner(v, ru), b = t->inner(rsv, u);
        const double scale = std::max(t->norm(ru) * t->norm(v), t->norm(rsv) * t->norm(u));
        record(o, std::abs(a - b) / scale / 1e-10, c, std::string(pc.name) + " pairing");
    }
    return o;
}

Outcome t_positivity(std::size_t cases)
{
    Outcome o;
    const auto& list = problems();
    for (std::size_t c = 0; c < cases; ++c) {
        Gen g(3000 + c);
        const Case& pc = list[c % list.size()];
        const Complex z = random_shift(g, pc);
        auto t = pc.problem->at(z);
        const CVector u = random_input(*pc.problem, g.next());
        const CVector ru = t->forward(u);
        const CVector tu = t->adjoint(ru);
        const Complex q = t->inner(u, tu);
        const double r2 = std::pow(t->norm(ru), 2);
        double v = std::abs(q.imag()) / r2 / 1e-10;
        v = std::max(v, std::abs(q.real() - r2) / r2 / 1e-9);
        if (q.real() < 0.0)
            v = std::max(v, 2.0);
        record(o, v, c, std::string(pc.name) + " <u, T u>");
    }
    return o;
}

Outcome ritz_monotonicity(std::size_t cases)
{
    Outcome o;
    const auto& list = problems();
    for (std::size_t c = 0; c < cases; ++c) {
        Gen g(4000 + c);
        double worst = 0.0;
        std::vector<double> mu;
        if (c % 4 != 3) {
            const std::size_t k = g.index(2, 40);
            std::vector<double> al(k), be(k);
            for (std::size_t i = 0; i < k; ++i) {
                al[i] = g.uniform(-1.0, 3.0);
                be[i] = g.uniform(1e-3, 1.0);
            }
            for (std::size_t j = 1; j <= k; ++j)
                mu.push_back(largest_ritz(std::span<const double>(al).first(j),
                                          std::span<const double>(be).first(j - 1))
                                 .first);
        } else {
            const Case& pc = list[(c / 4) % list.size()];
            LanczosOptions opts;
            opts.k_max = 40;
            mu = resolvent_norm(*pc.problem, random_shift(g, pc), g.next(), opts).mu_history;
        }
        for (std::size_t j = 1; j < mu.size(); ++j)
            worst = std::max(worst, (mu[j - 1] - mu[j]) / (1e-12 * std::abs(mu[j - 1])));
        record(o, worst, c, "Ritz value decreased");
    }
    return o;
}

Outcome qr_certificate(std::size_t cases)
{
    Outcome o;
    for (std::size_t c = 0; c < cases; ++c) {
        Gen g(5000 + c);
        const RandomBanded a(g.next(), g.index(0, 4), g.index(0, 6));
        const CVector u = g.vector(g.index(1, 30), g.uniform(0.3, 1.0));
        const SolveReport rep = adaptive_qr_solve(a, u);
        CVector r = a.apply(rep.solution);
        r.resize(std::max(r.size(), u.size()));
        for (std::size_t i = 0; i < u.size(); ++i)
            r[i] -= u[i];
        const double scale =
            kernels::norm2(u) + a.diag_scale(rep.solution.size()) * kernels::norm2(rep.solution);
        const double res = kernels::norm2(r) / scale;
        double v = res / (64.0 * machine_eps);
        if (!rep.converged || !(rep.tail_residual < machine_eps * rep.rhs_norm))
            v = std::max(v, 2.0);
        record(o, v, c, "residual certificate");
    }
    return o;
}

Outcome grid_determinism(std::size_t cases)
{
    Outcome o;
    const auto& list = problems();
    for (std::size_t c = 0; c < cases; ++c) {
        Gen g(6000 + c);
        const Case& pc = list[c % 3]; // the cheap differential / Volterra cases
        GridSpec spec;
        spec.re_min = g.uniform(pc.re0, 0.5 * (pc.re0 + pc.re1));
        spec.re_max = g.uniform(0.5 * (pc.re0 + pc.re1), pc.re1);
        spec.im_min = g.uniform(pc.im0, 0.5 * (pc.im0 + pc.im1));
        spec.im_max = g.uniform(0.5 * (pc.im0 + pc.im1), pc.im1);
        spec.nx = g.index(2, 4);
        spec.ny = g.index(2, 3);
        SweepOptions opts;
        opts.seed = g.next();
        opts.workers = 1;
        const GridResult one = sweep(*pc.problem, spec, opts);
        opts.workers = static_cast<unsigned>(g.index(2, 4));
        const GridResult many = sweep(*pc.problem, spec, opts);
        bool same = one.points.size() == many.points.size();
        for (std::size_t i = 0; same && i < one.points.size(); ++i) {
            const GridPoint &p = one.points[i], &q = many.points[i];
            same = p.z == q.z && p.resolvent_norm == q.resolvent_norm && p.dof == q.dof &&
                   p.iterations == q.iterations && p.flag == q.flag;
        }
        record(o, same ? 0.0 : 2.0, c, std::string(pc.name) + " sweep differs across workers");
    }
    return o;
}

} // namespace props
