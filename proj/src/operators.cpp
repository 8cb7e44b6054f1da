#include <pscont/operators.hpp>

#include <pscont/kernels.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace pscont {

Complex ResolventApplicator::inner(std::span<const Complex> x, std::span<const Complex> y) const
{
    return kernels::dot(x, y);
}

double ResolventApplicator::norm(std::span<const Complex> x) const
{
    return std::sqrt(std::max(0.0, inner(x, x).real()));
}

Complex Problem::inner(std::span<const Complex> x, std::span<const Complex> y) const { return kernels::dot(x, y); }

CVector random_coefficients(std::uint64_t seed, std::size_t n, double decay)
{
    // raw engine bits only, so streams agree across standard libraries
    std::mt19937_64 rng(seed);
    const auto unit = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
    CVector c(n);
    double w = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double re = unit();
        const double im = unit();
        c[k] = w * Complex(re, im);
        w *= decay;
    }
    return c;
}

CVector Problem::start_vector(std::uint64_t seed) const
{
    CVector c = random_coefficients(seed);
    const double nrm = std::sqrt(inner(c, c).real());
    for (Complex& v : c)
        v /= nrm;
    return c;
}

DifferentialExpression formal_adjoint(const DifferentialExpression& tau)
{
    const int n = tau.order();
    DifferentialExpression out{tau.interval, std::vector<LegendreSeries>(static_cast<std::size_t>(std::max(n + 1, 0)),
                                                                        LegendreSeries(tau.interval))};
    for (int k = 0; k <= n; ++k) {
        const LegendreSeries& a = tau.coeffs[static_cast<std::size_t>(k)];
        if (a.empty())
            continue;
        const LegendreSeries abar = conj(a);
        double binom = 1.0; // C(k, i), built up from i = k downward
        for (int i = k; i >= 0; --i) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            LegendreSeries term = derivative(abar, k - i);
            term.trim();
            if (!term.empty()) {
                LegendreSeries& c = out.coeffs[static_cast<std::size_t>(i)];
                c = c + Complex(sign * binom) * term;
            }
            binom = binom * i / (k - i + 1);
        }
    }
    for (LegendreSeries& c : out.coeffs)
        c.trim();
    return out;
}

namespace {

class Pencil final : public ColumnOperator {
public:
    Pencil(Complex z, OperatorPtr b, OperatorPtr a) : z_(z), b_(std::move(b)), a_(std::move(a)) {}
    void column(std::size_t j, SparseColumn& out) const override
    {
        b_->column(j, out);
        for (Complex& v : out.values)
            v *= z_;
        SparseColumn c;
        a_->column(j, c);
        out.add(-1.0, c);
    }
    std::size_t lower_bandwidth() const override { return std::max(b_->lower_bandwidth(), a_->lower_bandwidth()); }
    std::size_t upper_bandwidth() const override { return std::max(b_->upper_bandwidth(), a_->upper_bandwidth()); }

private:
    Complex z_;
    OperatorPtr b_, a_;
};

bool is_unit(const DifferentialExpression& e)
{
    if (e.order() != 0)
        return false;
    const LegendreSeries& c = e.coeffs[0];
    return c.size() == 1 && std::abs(c.coeffs[0] - std::sqrt(e.interval.length())) < 1e-15 * std::sqrt(e.interval.length());
}

// Differential operators and generalized problems share one path: the
// plain differential case is B = identity.
class PencilProblem final : public Problem {
public:
    PencilProblem(const GepSpec& spec, std::string family) : family_(std::move(family))
    {
        const DifferentialSpec& a = spec.a;
        iv_ = a.tau.interval;
        order_ = a.tau.order();
        if (order_ < 1)
            throw DomainError("differential operator needs order >= 1");
        if (a.bcs.size() != static_cast<std::size_t>(order_) || a.adjoint_bcs.size() != static_cast<std::size_t>(order_))
            throw DomainError("number of boundary functionals must equal the order");
        if (spec.b.order() >= order_)
            throw DomainError("B must have lower order than A");
        tau_a_ = a.tau;
        tau_b_ = spec.b;
        tau_a_star_ = a.adjoint_tau.coeffs.empty() ? formal_adjoint(a.tau) : a.adjoint_tau;
        tau_b_star_ = spec.adjoint_b.coeffs.empty() ? formal_adjoint(spec.b) : spec.adjoint_b;
        energy_ = spec.energy_norm;
        unit_b_ = is_unit(tau_b_) && is_unit(tau_b_star_);

        p_a_ = std::make_shared<RecombinedBasis>(a.bcs, iv_);
        p_as_ = std::make_shared<RecombinedBasis>(a.adjoint_bcs, iv_);
        OperatorPtr lb = assemble(tau_b_, order_);
        OperatorPtr la = assemble(tau_a_, order_);
        OperatorPtr la_star = assemble(tau_a_star_, order_);
        bhat_ = cached(product({lb, p_a_}));
        ahat_ = cached(product({la, p_a_}));
        ahat_star_ = cached(product({la_star, p_as_}));
        rhs_forward_ = lb;
        if (energy_) {
            bhat_star_ = cached(product({lb, p_as_}));
            rhs_adjoint_ = lb;
            if (spec.b_bcs.empty())
                throw DomainError("energy norm needs boundary functionals for B");
            p_b_ = std::make_shared<RecombinedBasis>(spec.b_bcs, iv_);
        } else {
            bhat_star_ = cached(product({assemble(tau_b_star_, order_), p_as_}));
            rhs_adjoint_ = conversion_chain(0, order_, iv_);
        }
    }

    Interval interval() const override { return iv_; }
    std::string family() const override { return family_; }

    Complex inner(std::span<const Complex> x, std::span<const Complex> y) const override
    {
        if (!energy_)
            return kernels::dot(x, y);
        const CVector bx = apply_b(x);
        return kernels::dot(bx, y);
    }

    CVector start_vector(std::uint64_t seed) const override
    {
        if (!energy_)
            return Problem::start_vector(seed);
        const CVector c = random_coefficients(seed);
        CVector x = p_b_->apply(c);
        const double nrm = std::sqrt(inner(x, x).real());
        for (Complex& v : x)
            v /= nrm;
        return x;
    }

    std::unique_ptr<ResolventApplicator> at(Complex z, const SolveOptions& opts) const override;

    CVector apply_b(std::span<const Complex> x) const
    {
        return tau_b_.apply(LegendreSeries(iv_, CVector(x.begin(), x.end()))).coeffs;
    }

    Interval iv_;
    int order_ = 0;
    std::string family_;
    DifferentialExpression tau_a_, tau_b_, tau_a_star_, tau_b_star_;
    bool energy_ = false;
    bool unit_b_ = false;
    std::shared_ptr<RecombinedBasis> p_a_, p_as_, p_b_;
    OperatorPtr bhat_, ahat_, bhat_star_, ahat_star_, rhs_forward_, rhs_adjoint_;
};

class PencilApplicator final : public ResolventApplicator {
public:
    PencilApplicator(const PencilProblem& p, Complex z, const SolveOptions& opts)
        : ResolventApplicator(z), p_(p), opts_(opts), fwd_(std::make_shared<Pencil>(z, p.bhat_, p.ahat_)),
          adj_(std::make_shared<Pencil>(std::conj(z), p.bhat_star_, p.ahat_star_))
    {
    }

    CVector forward(std::span<const Complex> u) override
    {
        const CVector rhs = p_.rhs_forward_->apply(u);
        SolveReport rep = adaptive_qr_solve(*fwd_, rhs, opts_);
        record_dof(rep.dof);
        return p_.p_a_->apply(rep.solution);
    }

    CVector adjoint(std::span<const Complex> v) override
    {
        const CVector rhs = p_.rhs_adjoint_->apply(v);
        SolveReport rep = adaptive_qr_solve(*adj_, rhs, opts_);
        record_dof(rep.dof);
        CVector h = p_.p_as_->apply(rep.solution);
        if (p_.energy_ || p_.unit_b_)
            return h;
        return p_.tau_b_star_.apply(LegendreSeries(p_.iv_, std::move(h))).coeffs;
    }

    Complex inner(std::span<const Complex> x, std::span<const Complex> y) const override { return p_.inner(x, y); }

private:
    const PencilProblem& p_;
    SolveOptions opts_;
    OperatorPtr fwd_, adj_;
};

std::unique_ptr<ResolventApplicator> PencilProblem::at(Complex z, const SolveOptions& opts) const
{
    return std::make_unique<PencilApplicator>(*this, z, opts);
}

// Fredholm: z I - C G^T with C_j = scale * f_j and G_j = g_j coefficients.
class FredholmProblem final : public Problem {
public:
    FredholmProblem(const FredholmSpec& spec, FredholmRoute route) : spec_(spec), route_(route)
    {
        const BivariateKernelApprox& k = spec.kernel;
        if (!(k.s_interval == k.t_interval))
            throw DomainError("Fredholm kernel must act on a single interval");
        iv_ = k.s_interval;
        const std::size_t r = k.rank();
        m_ = Eigen::MatrixXcd::Zero(static_cast<long>(r), static_cast<long>(r));
        for (std::size_t j = 0; j < r; ++j) {
            CVector c = k.row_factors[j].coeffs;
            for (Complex& v : c)
                v *= spec.scale;
            c_.push_back(std::move(c));
            g_.push_back(k.col_factors[j].coeffs);
        }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                m_(static_cast<long>(i), static_cast<long>(j)) = plain_dot(g_[i], c_[j]);
        for (std::size_t j = 0; j < r; ++j) {
            CVector cs = g_[j], gs = c_[j];
            for (Complex& v : cs)
                v = std::conj(v);
            for (Complex& v : gs)
                v = std::conj(v);
            c_star_.push_back(std::move(cs));
            g_star_.push_back(std::move(gs));
        }
        lr_ = low_rank(c_, g_);
        lr_star_ = low_rank(c_star_, g_star_);
    }

    static Complex plain_dot(const CVector& a, const CVector& b)
    {
        Complex s{};
        for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
            s += a[k] * b[k];
        return s;
    }

    Interval interval() const override { return iv_; }
    std::string family() const override { return "fredholm"; }
    std::unique_ptr<ResolventApplicator> at(Complex z, const SolveOptions& opts) const override;

    FredholmSpec spec_;
    FredholmRoute route_;
    Interval iv_;
    std::vector<CVector> c_, g_, c_star_, g_star_;
    Eigen::MatrixXcd m_;
    OperatorPtr lr_, lr_star_;
};

class WoodburyApplicator final : public ResolventApplicator {
public:
    WoodburyApplicator(const FredholmProblem& p, Complex z) : ResolventApplicator(z), p_(p)
    {
        const long r = p.m_.rows();
        if (r > 0) {
            Eigen::MatrixXcd a = z * Eigen::MatrixXcd::Identity(r, r) - p.m_;
            lu_.compute(a);
            lu_star_.compute(a.adjoint());
            if (lu_.rcond() < 1e3 * machine_eps)
                throw NearSingularError("shift is numerically an eigenvalue of the Fredholm operator", 0);
        }
    }

    CVector forward(std::span<const Complex> u) override { return solve(z(), p_.c_, p_.g_, lu_, u); }
    CVector adjoint(std::span<const Complex> v) override { return solve(std::conj(z()), p_.c_star_, p_.g_star_, lu_star_, v); }

private:
    CVector solve(Complex s, const std::vector<CVector>& c, const std::vector<CVector>& g,
                  const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, std::span<const Complex> u)
    {
        const std::size_t r = c.size();
        std::size_t len = u.size();
        for (const CVector& cj : c)
            len = std::max(len, cj.size());
        CVector v(len);
        std::copy(u.begin(), u.end(), v.begin());
        if (r > 0) {
            Eigen::VectorXcd y(static_cast<long>(r));
            for (std::size_t i = 0; i < r; ++i) {
                Complex acc{};
                for (std::size_t k = 0; k < std::min(u.size(), g[i].size()); ++k)
                    acc += g[i][k] * u[k];
                y(static_cast<long>(i)) = acc;
            }
            const Eigen::VectorXcd x = lu.solve(y);
            for (std::size_t j = 0; j < r; ++j)
                kernels::axpy(x(static_cast<long>(j)), c[j], std::span<Complex>(v).first(c[j].size()));
        }
        for (Complex& val : v)
            val /= s;
        record_dof(len);
        return v;
    }

    const FredholmProblem& p_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_, lu_star_;
};

class BandedApplicator final : public ResolventApplicator {
public:
    BandedApplicator(Complex z, OperatorPtr fwd, OperatorPtr adj, const SolveOptions& opts)
        : ResolventApplicator(z), fwd_(std::move(fwd)), adj_(std::move(adj)), opts_(opts)
    {
    }
    CVector forward(std::span<const Complex> u) override { return run(*fwd_, u); }
    CVector adjoint(std::span<const Complex> v) override { return run(*adj_, v); }

private:
    CVector run(const ColumnOperator& a, std::span<const Complex> u)
    {
        SolveReport rep = adaptive_qr_solve(a, u, opts_);
        record_dof(rep.dof);
        return std::move(rep.solution);
    }
    OperatorPtr fwd_, adj_;
    SolveOptions opts_;
};

std::unique_ptr<ResolventApplicator> FredholmProblem::at(Complex z, const SolveOptions& opts) const
{
    if (z == Complex{})
        throw DomainError("Fredholm resolvent is not compact-plus-scalar at z = 0");
    if (route_ == FredholmRoute::woodbury)
        return std::make_unique<WoodburyApplicator>(*this, z);
    return std::make_unique<BandedApplicator>(z, shifted_pencil(z, identity_operator(), lr_),
                                              shifted_pencil(std::conj(z), identity_operator(), lr_star_), opts);
}

OperatorPtr volterra_sum(const BivariateKernelApprox& k, bool right, Complex scale, bool adjoint)
{
    const Interval iv = k.s_interval;
    std::vector<std::pair<Complex, OperatorPtr>> terms;
    for (std::size_t j = 0; j < k.rank(); ++j) {
        // V* = conj(scale) sum M[conj g] J_other M[conj f]
        const LegendreSeries left = adjoint ? conj(k.col_factors[j]) : k.row_factors[j];
        const LegendreSeries rightf = adjoint ? conj(k.row_factors[j]) : k.col_factors[j];
        const bool use_right = adjoint ? !right : right;
        OperatorPtr j_op = use_right ? right_integration_matrix(iv) : integration_matrix(iv);
        terms.emplace_back(adjoint ? std::conj(scale) : scale,
                           product({multiplication_matrix(left, 0.5), j_op, multiplication_matrix(rightf, 0.5)}));
    }
    return linear_combination(std::move(terms));
}

class VolterraProblem final : public Problem {
public:
    explicit VolterraProblem(const VolterraSpec& spec)
    {
        const BivariateKernelApprox& k = spec.kernel;
        if (!(k.s_interval == k.t_interval))
            throw DomainError("Volterra kernel must act on a single interval");
        iv_ = k.s_interval;
        const bool right = spec.direction == VolterraSpec::Direction::right;
        v_ = cached(volterra_sum(k, right, spec.scale, false));
        // transposing the assembled matrix keeps the two solves consistent to
        // roundoff in the solver, not in the factor products
        v_star_ = cached(conjugate_transpose(v_));
    }
    Interval interval() const override { return iv_; }
    std::string family() const override { return "volterra"; }
    std::unique_ptr<ResolventApplicator> at(Complex z, const SolveOptions& opts) const override
    {
        if (z == Complex{})
            throw DomainError("Volterra resolvent is not compact-plus-scalar at z = 0");
        return std::make_unique<BandedApplicator>(z, shifted_pencil(z, identity_operator(), v_),
                                                  shifted_pencil(std::conj(z), identity_operator(), v_star_), opts);
    }

    Interval iv_;
    OperatorPtr v_, v_star_;
};

} // namespace

OperatorPtr shifted_pencil(Complex z, OperatorPtr b, OperatorPtr a)
{
    return std::make_shared<Pencil>(z, std::move(b), std::move(a));
}

ProblemPtr build_differential(const DifferentialSpec& spec)
{
    GepSpec g;
    g.a = spec;
    g.b = DifferentialExpression{spec.tau.interval, {LegendreSeries::constant(spec.tau.interval, 1.0)}};
    g.adjoint_b = g.b;
    return std::make_shared<PencilProblem>(g, "differential");
}

ProblemPtr build_gep(const GepSpec& spec) { return std::make_shared<PencilProblem>(spec, spec.energy_norm ? "gep-energy" : "gep"); }

ProblemPtr build_fredholm(const FredholmSpec& spec, FredholmRoute route)
{
    return std::make_shared<FredholmProblem>(spec, route);
}

ProblemPtr build_volterra(const VolterraSpec& spec) { return std::make_shared<VolterraProblem>(spec); }

OperatorPtr fredholm_rep(const FredholmSpec& spec, Complex z)
{
    std::vector<CVector> c, g;
    for (std::size_t j = 0; j < spec.kernel.rank(); ++j) {
        CVector cj = spec.kernel.row_factors[j].coeffs;
        for (Complex& v : cj)
            v *= spec.scale;
        c.push_back(std::move(cj));
        g.push_back(spec.kernel.col_factors[j].coeffs);
    }
    return shifted_pencil(z, identity_operator(), low_rank(std::move(c), std::move(g)));
}

OperatorPtr volterra_rep(const VolterraSpec& spec)
{
    return volterra_sum(spec.kernel, spec.direction == VolterraSpec::Direction::right, spec.scale, false);
}

} // namespace pscont
