#include <pscont/finite_section.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace pscont {

std::string_view to_string(Weighting w)
{
    switch (w) {
    case Weighting::none: return "none";
    case Weighting::gauss_chebyshev: return "gc";
    case Weighting::clenshaw_curtis: return "cc";
    }
    return "none";
}

Weighting weighting_from_string(std::string_view s)
{
    if (s == "none")
        return Weighting::none;
    if (s == "gc")
        return Weighting::gauss_chebyshev;
    if (s == "cc")
        return Weighting::clenshaw_curtis;
    throw DomainError("unknown weighting '" + std::string(s) + "'");
}

std::vector<double> chebyshev_points(std::size_t n, Interval iv)
{
    if (n < 2)
        throw DomainError("need at least 2 Chebyshev points");
    const double m = static_cast<double>(n - 1);
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        // sin form keeps the nodes symmetric to rounding
        const double t = std::sin(std::numbers::pi * (2.0 * static_cast<double>(j) - m) / (2.0 * m));
        x[j] = iv.from_reference(t);
    }
    x.front() = iv.a;
    x.back() = iv.b;
    return x;
}

Eigen::MatrixXd chebyshev_differentiation(std::size_t n, Interval iv)
{
    const std::vector<double> x = chebyshev_points(n, Interval{-1.0, 1.0});
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    auto c = [&](std::size_t j) { return ((j == 0 || j + 1 == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const double v = c(i) / c(j) / (x[i] - x[j]);
            d(i, j) = v;
            row += v;
        }
        d(i, i) = -row;
    }
    return d * (2.0 / iv.length());
}

std::vector<double> clenshaw_curtis_weights(std::size_t n, Interval iv)
{
    if (n < 2)
        throw DomainError("need at least 2 Chebyshev points");
    const std::size_t m = n - 1;
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double theta = std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        double v = 1.0;
        for (std::size_t k = 1; k <= m / 2; ++k) {
            const double b = (2 * k == m) ? 1.0 : 2.0;
            v -= b * std::cos(2.0 * static_cast<double>(k) * theta) / (4.0 * static_cast<double>(k * k) - 1.0);
        }
        const double cj = (j == 0 || j == m) ? 1.0 : 2.0;
        w[m - j] = cj * v / static_cast<double>(m) * 0.5 * iv.length();
    }
    return w;
}

std::vector<double> gauss_chebyshev_weights(std::size_t n, Interval iv)
{
    const std::vector<double> x = chebyshev_points(n, Interval{-1.0, 1.0});
    const double m = static_cast<double>(n - 1);
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double end = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        w[j] = end * std::numbers::pi / m * std::sqrt(std::max(0.0, 1.0 - x[j] * x[j])) * 0.5 * iv.length();
    }
    return w;
}

FiniteSection discretize_collocation(const DifferentialExpression& tau, const std::vector<BoundaryFunctional>& bcs,
                                     std::size_t n, Weighting weighting)
{
    const int order = tau.order();
    if (order < 0)
        throw DomainError("empty differential expression");
    if (n < static_cast<std::size_t>(order) + 2)
        throw DomainError("collocation needs n >= order + 2");
    if (bcs.size() + 1 >= n)
        throw DomainError("too many boundary functionals for n");
    const Interval iv = tau.interval;
    const auto N = static_cast<Eigen::Index>(n);
    const std::vector<double> x = chebyshev_points(n, iv);
    const Eigen::MatrixXd d1 = chebyshev_differentiation(n, iv);

    std::vector<Eigen::MatrixXd> powers{Eigen::MatrixXd::Identity(N, N)};
    int max_d = order;
    for (const auto& bc : bcs)
        for (const auto& term : bc.terms)
            max_d = std::max(max_d, term.derivative);
    for (int k = 1; k <= max_d; ++k)
        powers.push_back(d1 * powers.back());

    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(N, N);
    for (int k = 0; k <= order; ++k) {
        const LegendreSeries& a = tau.coeffs[static_cast<std::size_t>(k)];
        if (a.empty())
            continue;
        for (Eigen::Index i = 0; i < N; ++i) {
            const Complex ai = evaluate(a, x[static_cast<std::size_t>(i)]);
            l.row(i) += ai * powers[static_cast<std::size_t>(k)].row(i).cast<Complex>();
        }
    }

    // boundary rows and the nodes they eliminate
    const auto m = static_cast<Eigen::Index>(bcs.size());
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(m, N);
    std::vector<Eigen::Index> removed;
    std::size_t left = 0, right = 0;
    for (Eigen::Index r = 0; r < m; ++r) {
        const BoundaryFunctional& bc = bcs[static_cast<std::size_t>(r)];
        if (bc.terms.empty())
            throw DomainError("empty boundary functional");
        for (const auto& term : bc.terms) {
            const Eigen::Index node = term.side == BoundaryFunctional::Side::left ? 0 : N - 1;
            b.row(r) += term.weight * powers[static_cast<std::size_t>(term.derivative)].row(node).cast<Complex>();
        }
        if (bc.terms.front().side == BoundaryFunctional::Side::left)
            removed.push_back(static_cast<Eigen::Index>(left++));
        else
            removed.push_back(N - 1 - static_cast<Eigen::Index>(right++));
    }
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < N; ++j)
        if (std::find(removed.begin(), removed.end(), j) == removed.end())
            kept.push_back(j);

    const auto nk = static_cast<Eigen::Index>(kept.size());
    Eigen::MatrixXcd br(m, m), bk(m, nk), lkr(nk, m), lkk(nk, nk);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c)
            br(r, c) = b(r, removed[static_cast<std::size_t>(c)]);
        for (Eigen::Index c = 0; c < nk; ++c)
            bk(r, c) = b(r, kept[static_cast<std::size_t>(c)]);
    }
    for (Eigen::Index r = 0; r < nk; ++r) {
        for (Eigen::Index c = 0; c < m; ++c)
            lkr(r, c) = l(kept[static_cast<std::size_t>(r)], removed[static_cast<std::size_t>(c)]);
        for (Eigen::Index c = 0; c < nk; ++c)
            lkk(r, c) = l(kept[static_cast<std::size_t>(r)], kept[static_cast<std::size_t>(c)]);
    }

    FiniteSection fs;
    fs.points = n;
    fs.weighting = weighting;
    if (m > 0) {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(br);
        if (!lu.isInvertible())
            throw IllPosedBoundaryError("boundary rows are singular on the eliminated nodes");
        fs.matrix = lkk - lkr * lu.solve(bk);
    } else {
        fs.matrix = lkk;
    }
    for (Eigen::Index j : kept)
        fs.nodes.push_back(x[static_cast<std::size_t>(j)]);

    if (weighting != Weighting::none) {
        const std::vector<double> w =
            weighting == Weighting::gauss_chebyshev ? gauss_chebyshev_weights(n, iv) : clenshaw_curtis_weights(n, iv);
        for (Eigen::Index j : kept) {
            const double wj = w[static_cast<std::size_t>(j)];
            if (!(wj > 0.0))
                throw DomainError("quadrature weight vanishes at a retained node");
            fs.weight.push_back(wj);
        }
    }
    return fs;
}

namespace {

Eigen::MatrixXcd weighted_matrix(const FiniteSection& fs)
{
    if (fs.weight.empty())
        return fs.matrix;
    Eigen::MatrixXcd m = fs.matrix;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) *= std::sqrt(fs.weight[static_cast<std::size_t>(i)] / fs.weight[static_cast<std::size_t>(j)]);
    return m;
}

} // namespace

EigToolCore::EigToolCore(const FiniteSection& fs)
{
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(weighted_matrix(fs), false);
    t_ = schur.matrixT();
}

EigToolResult EigToolCore::resolvent_norm(Complex z, double delta, std::uint64_t seed) const
{
    EigToolResult res;
    const Eigen::Index n = t_.rows();
    Eigen::MatrixXcd a = -t_;
    a.diagonal().array() += z;
    const double scale = a.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(a(i, i)) <= machine_eps * scale) {
            res.resolvent_norm = infinity;
            res.singular = true;
            return res;
        }
    const auto upper = a.triangularView<Eigen::Upper>();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::VectorXcd q(n);
    for (Eigen::Index i = 0; i < n; ++i)
        q(i) = Complex(g(rng), g(rng));
    q.normalize();
    Eigen::VectorXcd q_prev = Eigen::VectorXcd::Zero(n);
    double beta = 0.0, mu_prev = 0.0;
    std::vector<double> alphas, betas;
    for (Eigen::Index k = 1; k <= n; ++k) {
        Eigen::VectorXcd w = upper.solve(q);
        w = upper.adjoint().solve(w);
        w -= beta * q_prev;
        const double alpha = q.dot(w).real();
        w -= alpha * q;
        alphas.push_back(alpha);
        beta = w.norm();
        const double mu = largest_ritz(alphas, betas).first;
        res.iterations = static_cast<std::size_t>(k);
        res.resolvent_norm = std::sqrt(std::max(mu, 0.0));
        if (!std::isfinite(mu)) {
            res.resolvent_norm = infinity;
            res.singular = true;
            return res;
        }
        if (k > 1 && std::abs(mu / mu_prev - 1.0) < delta)
            break;
        if (beta <= machine_eps * std::abs(mu))
            break;
        mu_prev = mu;
        betas.push_back(beta);
        q_prev = q;
        q = w / beta;
    }
    return res;
}

double dense_resolvent_norm(const FiniteSection& fs, Complex z)
{
    Eigen::MatrixXcd a = -weighted_matrix(fs);
    a.diagonal().array() += z;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const double smin = svd.singularValues().minCoeff();
    return smin > 0.0 ? 1.0 / smin : infinity;
}

GridResult sweep_finite_section(const FiniteSection& fs, const GridSpec& spec, const FiniteSectionSweepOptions& opts)
{
    const EigToolCore core(fs);
    GridResult res;
    res.spec = spec;
    res.metadata.seed = opts.seed;
    res.metadata.delta = opts.delta;
    res.metadata.c_l = 0.0;
    res.metadata.method = "finite_section";
    res.metadata.version = library_version();
    res.points = sweep_points(
        spec,
        [&](Complex z, std::size_t ix, std::size_t iy) {
            const EigToolResult r = core.resolvent_norm(z, opts.delta, point_seed(opts.seed, ix, iy));
            GridPoint p;
            p.z = z;
            p.resolvent_norm = r.resolvent_norm;
            p.dof = core.size();
            p.iterations = r.iterations;
            p.flag = r.singular ? Termination::near_singular : Termination::tolerance;
            return p;
        },
        opts.workers);
    return res;
}

} // namespace pscont
