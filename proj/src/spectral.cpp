#include <pscont/spectral.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pscont {

void SparseColumn::add(Complex alpha, const SparseColumn& other)
{
    if (other.empty() || alpha == Complex{})
        return;
    if (empty()) {
        first = other.first;
        values.resize(other.values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            values[i] = alpha * other.values[i];
        return;
    }
    const std::size_t lo = std::min(first, other.first);
    const std::size_t hi = std::max(end(), other.end());
    if (lo != first || hi != end()) {
        CVector widened(hi - lo);
        std::copy(values.begin(), values.end(), widened.begin() + static_cast<long>(first - lo));
        values = std::move(widened);
        first = lo;
    }
    const std::size_t off = other.first - first;
    for (std::size_t i = 0; i < other.values.size(); ++i)
        values[off + i] += alpha * other.values[i];
}

Complex ColumnOperator::entry(std::size_t i, std::size_t j) const
{
    SparseColumn c;
    column(j, c);
    return c.at(i);
}

SparseColumn ColumnOperator::apply(const SparseColumn& x) const
{
    SparseColumn y, c;
    for (std::size_t k = 0; k < x.values.size(); ++k) {
        if (x.values[k] == Complex{})
            continue;
        column(x.first + k, c);
        y.add(x.values[k], c);
    }
    return y;
}

CVector ColumnOperator::apply(std::span<const Complex> x) const
{
    SparseColumn in{0, CVector(x.begin(), x.end())};
    SparseColumn y = apply(in);
    CVector out(y.end());
    std::copy(y.values.begin(), y.values.end(), out.begin() + static_cast<long>(y.first));
    return out;
}

namespace {

double half_width_scale(Interval iv) { return std::sqrt(2.0 / iv.length()); }

class ScaledIdentity final : public ColumnOperator {
public:
    explicit ScaledIdentity(Complex s) : s_(s) {}
    void column(std::size_t j, SparseColumn& out) const override
    {
        out.first = j;
        out.values.assign(1, s_);
    }
    std::size_t lower_bandwidth() const override { return 0; }
    std::size_t upper_bandwidth() const override { return 0; }

private:
    Complex s_;
};

class Conversion final : public ColumnOperator {
public:
    Conversion(double lambda, Interval iv) : lambda_(lambda), scale_(half_width_scale(iv)) {}
    void column(std::size_t j, SparseColumn& out) const override
    {
        const double n = static_cast<double>(j);
        double diag;
        if (lambda_ == 0.5)
            diag = scale_ / (2.0 * std::sqrt(n + 0.5));
        else
            diag = lambda_ / (n + lambda_);
        if (j >= 2) {
            out.first = j - 2;
            out.values.assign({-diag, 0.0, diag});
        } else {
            out.first = j;
            out.values.assign(1, diag);
        }
    }
    std::size_t lower_bandwidth() const override { return 0; }
    std::size_t upper_bandwidth() const override { return 2; }

private:
    double lambda_;
    double scale_;
};

class Differentiation final : public ColumnOperator {
public:
    Differentiation(int order, Interval iv) : order_(static_cast<std::size_t>(order))
    {
        double dfact = 1.0;
        for (int i = 1; i <= 2 * order - 1; i += 2)
            dfact *= i;
        factor_ = half_width_scale(iv) * dfact * std::pow(2.0 / iv.length(), order);
    }
    void column(std::size_t j, SparseColumn& out) const override
    {
        if (j < order_) {
            out.clear();
            return;
        }
        out.first = j - order_;
        out.values.assign(1, factor_ * std::sqrt(static_cast<double>(j) + 0.5));
    }
    std::size_t lower_bandwidth() const override { return 0; }
    std::size_t upper_bandwidth() const override { return order_; }

private:
    std::size_t order_;
    double factor_;
};

inline double jacobi_a(std::size_t k)
{
    const double kk = static_cast<double>(k);
    return (kk + 1.0) / std::sqrt((2.0 * kk + 1.0) * (2.0 * kk + 3.0));
}

class Multiplication final : public ColumnOperator {
public:
    Multiplication(const LegendreSeries& f, double lambda)
        : c_(f.coeffs), lambda_(lambda), scale_(half_width_scale(f.interval))
    {
        while (!c_.empty() && c_.back() == Complex{})
            c_.pop_back();
    }

    void column(std::size_t j, SparseColumn& out) const override
    {
        const std::size_t m = c_.empty() ? 0 : c_.size() - 1;
        if (c_.empty()) {
            out.clear();
            return;
        }
        const std::size_t lo = j >= m ? j - m : 0;
        const std::size_t len = j + m + 1 - lo;
        // Clenshaw with the matrix argument X_lambda applied to e_j
        CVector b1(len), b2(len), xb(len), bk(len);
        const std::size_t jj = j - lo;
        for (std::size_t k = m + 1; k-- > 0;) {
            apply_x(b1, lo, xb);
            const double ak = jacobi_a(k);
            const double r = ak / jacobi_a(k + 1);
            for (std::size_t i = 0; i < len; ++i)
                bk[i] = xb[i] / ak - r * b2[i];
            bk[jj] += c_[k];
            std::swap(b2, b1);
            std::swap(b1, bk);
        }
        const double p0 = scale_ * std::numbers::sqrt2 / 2.0;
        out.first = lo;
        out.values.resize(len);
        for (std::size_t i = 0; i < len; ++i)
            out.values[i] = p0 * b1[i];
    }
    std::size_t lower_bandwidth() const override { return c_.empty() ? 0 : c_.size() - 1; }
    std::size_t upper_bandwidth() const override { return c_.empty() ? 0 : c_.size() - 1; }

private:
    // y = X v on the window starting at row lo; entries pushed past the
    // window are dropped (they cannot reach the final window).
    void apply_x(const CVector& v, std::size_t lo, CVector& y) const
    {
        const std::size_t len = v.size();
        std::fill(y.begin(), y.end(), Complex{});
        for (std::size_t i = 0; i < len; ++i) {
            const Complex d = v[i];
            if (d == Complex{})
                continue;
            const std::size_t n = lo + i;
            const double nn = static_cast<double>(n);
            double up, down;
            if (lambda_ == 0.5) {
                up = jacobi_a(n);
                down = n > 0 ? jacobi_a(n - 1) : 0.0;
            } else {
                up = (nn + 1.0) / (2.0 * (nn + lambda_));
                down = (nn + 2.0 * lambda_ - 1.0) / (2.0 * (nn + lambda_));
            }
            if (i + 1 < len)
                y[i + 1] += up * d;
            if (n > 0 && i > 0)
                y[i - 1] += down * d;
        }
    }

    CVector c_;
    double lambda_;
    double scale_;
};

class Integration final : public ColumnOperator {
public:
    Integration(Interval iv, bool right) : iv_(iv), right_(right) {}
    void column(std::size_t j, SparseColumn& out) const override
    {
        const double h = 0.5 * iv_.length();
        const double sign = right_ ? -1.0 : 1.0;
        if (j == 0) {
            // int_a^x p_0 = h (p_0 + p_1 / sqrt(3))
            out.first = 0;
            out.values.assign({sign * h, sign * h / std::sqrt(3.0)});
            if (right_)
                out.values[0] += iv_.length();
            return;
        }
        const double k = static_cast<double>(j);
        const double c = h * std::sqrt(k + 0.5) / (2.0 * k + 1.0);
        out.first = j - 1;
        out.values.assign({-sign * c / std::sqrt(k - 0.5), 0.0, sign * c / std::sqrt(k + 1.5)});
    }
    std::size_t lower_bandwidth() const override { return 1; }
    std::size_t upper_bandwidth() const override { return 1; }

private:
    Interval iv_;
    bool right_;
};

class LinearCombination final : public ColumnOperator {
public:
    explicit LinearCombination(std::vector<std::pair<Complex, OperatorPtr>> terms) : terms_(std::move(terms))
    {
        for (const auto& [a, op] : terms_) {
            lower_ = std::max(lower_, op->lower_bandwidth());
            upper_ = std::max(upper_, op->upper_bandwidth());
        }
    }
    void column(std::size_t j, SparseColumn& out) const override
    {
        out.clear();
        SparseColumn c;
        for (const auto& [a, op] : terms_) {
            op->column(j, c);
            out.add(a, c);
        }
    }
    std::size_t lower_bandwidth() const override { return lower_; }
    std::size_t upper_bandwidth() const override { return upper_; }

private:
    std::vector<std::pair<Complex, OperatorPtr>> terms_;
    std::size_t lower_ = 0;
    std::size_t upper_ = 0;
};

class Product final : public ColumnOperator {
public:
    explicit Product(std::vector<OperatorPtr> factors) : factors_(std::move(factors))
    {
        for (const auto& op : factors_) {
            lower_ += op->lower_bandwidth();
            upper_ += op->upper_bandwidth();
        }
    }
    void column(std::size_t j, SparseColumn& out) const override
    {
        factors_.back()->column(j, out);
        for (std::size_t f = factors_.size() - 1; f-- > 0;)
            out = factors_[f]->apply(out);
    }
    std::size_t lower_bandwidth() const override { return lower_; }
    std::size_t upper_bandwidth() const override { return upper_; }

private:
    std::vector<OperatorPtr> factors_;
    std::size_t lower_ = 0;
    std::size_t upper_ = 0;
};

class LowRank final : public ColumnOperator {
public:
    LowRank(std::vector<CVector> left, std::vector<CVector> right) : left_(std::move(left)), right_(std::move(right))
    {
        for (const CVector& c : left_)
            rows_ = std::max(rows_, c.size());
        for (const CVector& r : right_)
            cols_ = std::max(cols_, r.size());
    }
    void column(std::size_t j, SparseColumn& out) const override
    {
        out.clear();
        if (j >= cols_)
            return;
        out.values.assign(rows_, Complex{});
        for (std::size_t r = 0; r < left_.size(); ++r) {
            if (j >= right_[r].size())
                continue;
            const Complex w = right_[r][j];
            for (std::size_t i = 0; i < left_[r].size(); ++i)
                out.values[i] += w * left_[r][i];
        }
    }
    std::size_t lower_bandwidth() const override { return rows_ > 0 ? rows_ - 1 : 0; }
    std::size_t upper_bandwidth() const override { return cols_ > 0 ? cols_ - 1 : 0; }

private:
    std::vector<CVector> left_, right_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
};

} // namespace

OperatorPtr identity_operator(Complex scale) { return std::make_shared<ScaledIdentity>(scale); }

OperatorPtr conversion_matrix(double lambda, Interval iv)
{
    const double twice = 2.0 * lambda;
    if (!(lambda > 0.0) || twice != std::floor(twice) || static_cast<long>(twice) % 2 != 1)
        throw DomainError("conversion order must be a positive half-integer");
    return std::make_shared<Conversion>(lambda, iv);
}

OperatorPtr conversion_chain(int k, int n, Interval iv)
{
    if (k > n || k < 0)
        throw DomainError("conversion chain needs 0 <= k <= n");
    if (k == n)
        return identity_operator();
    std::vector<OperatorPtr> factors;
    for (int i = n - 1; i >= k; --i)
        factors.push_back(conversion_matrix(i + 0.5, iv));
    if (factors.size() == 1)
        return factors.front();
    return product(std::move(factors));
}

OperatorPtr differentiation_matrix(int order, Interval iv)
{
    if (order < 1)
        throw DomainError("differentiation order must be >= 1");
    return std::make_shared<Differentiation>(order, iv);
}

OperatorPtr multiplication_matrix(const LegendreSeries& f, double lambda)
{
    const double twice = 2.0 * lambda;
    if (!(lambda > 0.0) || twice != std::floor(twice) || static_cast<long>(twice) % 2 != 1)
        throw DomainError("multiplication order must be a positive half-integer");
    LegendreSeries g = f;
    g.trim();
    if (g.size() <= 1)
        return identity_operator(g.coeff(0) / std::sqrt(f.interval.length()));
    return std::make_shared<Multiplication>(g, lambda);
}

OperatorPtr integration_matrix(Interval iv) { return std::make_shared<Integration>(iv, false); }

OperatorPtr right_integration_matrix(Interval iv) { return std::make_shared<Integration>(iv, true); }

OperatorPtr linear_combination(std::vector<std::pair<Complex, OperatorPtr>> terms)
{
    return std::make_shared<LinearCombination>(std::move(terms));
}

OperatorPtr product(std::vector<OperatorPtr> factors)
{
    if (factors.empty())
        return identity_operator();
    return std::make_shared<Product>(std::move(factors));
}

class ConjugateTranspose final : public ColumnOperator {
public:
    explicit ConjugateTranspose(OperatorPtr a) : a_(std::move(a)) {}
    void column(std::size_t j, SparseColumn& out) const override
    {
        const std::size_t lo = a_->lower_bandwidth(), up = a_->upper_bandwidth();
        out.first = j >= lo ? j - lo : 0;
        out.values.assign(j + up + 1 - out.first, Complex{});
        SparseColumn c;
        for (std::size_t i = out.first; i <= j + up; ++i) {
            a_->column(i, c);
            out.values[i - out.first] = std::conj(c.at(j));
        }
    }
    std::size_t lower_bandwidth() const override { return a_->upper_bandwidth(); }
    std::size_t upper_bandwidth() const override { return a_->lower_bandwidth(); }

private:
    OperatorPtr a_;
};

OperatorPtr conjugate_transpose(OperatorPtr a) { return std::make_shared<ConjugateTranspose>(std::move(a)); }

OperatorPtr low_rank(std::vector<CVector> left, std::vector<CVector> right)
{
    if (left.size() != right.size())
        throw DomainError("low-rank factors need matching rank");
    return std::make_shared<LowRank>(std::move(left), std::move(right));
}

ColumnCache::ColumnCache(OperatorPtr base) : base_(std::move(base)) {}

const SparseColumn& ColumnCache::cached(std::size_t j) const
{
    std::lock_guard lock(mutex_);
    while (columns_.size() <= j) {
        SparseColumn c;
        base_->column(columns_.size(), c);
        columns_.push_back(std::move(c));
    }
    return columns_[j];
}

void ColumnCache::column(std::size_t j, SparseColumn& out) const { out = cached(j); }

OperatorPtr cached(OperatorPtr base) { return std::make_shared<ColumnCache>(std::move(base)); }

double legendre_endpoint_derivative(std::size_t n, int d, bool right, Interval iv)
{
    const double nn = static_cast<double>(n);
    double v = 1.0;
    for (int i = 0; i < d; ++i)
        v *= (nn * (nn + 1.0) - i * (i + 1.0)) / (2.0 * (i + 1.0));
    if (!right && (n + static_cast<std::size_t>(d)) % 2 == 1)
        v = -v;
    return v * half_width_scale(iv) * std::sqrt(nn + 0.5) * std::pow(2.0 / iv.length(), d);
}

Complex BoundaryFunctional::on_basis(std::size_t n, Interval iv) const
{
    Complex s{};
    for (const Term& t : terms)
        s += t.weight * legendre_endpoint_derivative(n, t.derivative, t.side == Side::right, iv);
    return s;
}

RecombinedBasis::RecombinedBasis(std::vector<BoundaryFunctional> bcs, Interval iv) : bcs_(std::move(bcs)), iv_(iv)
{
    stencil(0);
}

CVector RecombinedBasis::stencil(std::size_t k) const
{
    const std::size_t n = bcs_.size();
    CVector s(n + 1);
    s[0] = 1.0;
    if (n == 0)
        return s;
    Eigen::MatrixXcd m(n, n);
    Eigen::VectorXcd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        double scale = 0.0;
        for (std::size_t j = 0; j <= n; ++j)
            scale = std::max(scale, std::abs(bcs_[i].on_basis(k + j, iv_)));
        if (scale == 0.0)
            throw IllPosedBoundaryError("boundary functional vanishes on the basis");
        for (std::size_t j = 1; j <= n; ++j)
            m(static_cast<long>(i), static_cast<long>(j - 1)) = bcs_[i].on_basis(k + j, iv_) / scale;
        rhs(static_cast<long>(i)) = -bcs_[i].on_basis(k, iv_) / scale;
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw IllPosedBoundaryError("boundary conditions admit no recombined basis");
    Eigen::VectorXcd x = lu.solve(rhs);
    double norm = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
        s[j] = x(static_cast<long>(j - 1));
        norm += std::norm(s[j]);
    }
    norm = std::sqrt(norm);
    for (Complex& c : s)
        c /= norm;
    return s;
}

void RecombinedBasis::column(std::size_t j, SparseColumn& out) const
{
    out.first = j;
    out.values = stencil(j);
}

int DifferentialExpression::order() const { return static_cast<int>(coeffs.size()) - 1; }

LegendreSeries DifferentialExpression::apply(const LegendreSeries& u) const
{
    LegendreSeries out(interval);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k].empty())
            continue;
        out = out + multiply(coeffs[k], derivative(u, static_cast<int>(k)));
    }
    return out;
}

OperatorPtr assemble(const DifferentialExpression& tau, int n)
{
    if (tau.order() > n)
        throw DomainError("target order below the order of the expression");
    std::vector<std::pair<Complex, OperatorPtr>> terms;
    for (int k = 0; k <= tau.order(); ++k) {
        const LegendreSeries& a = tau.coeffs[static_cast<std::size_t>(k)];
        LegendreSeries at = a;
        at.trim();
        if (at.empty())
            continue;
        std::vector<OperatorPtr> factors;
        if (k < n)
            factors.push_back(conversion_chain(k, n, tau.interval));
        factors.push_back(multiplication_matrix(at, k + 0.5));
        if (k > 0)
            factors.push_back(differentiation_matrix(k, tau.interval));
        terms.emplace_back(1.0, factors.size() == 1 ? factors.front() : product(std::move(factors)));
    }
    if (terms.empty())
        return linear_combination({});
    if (terms.size() == 1)
        return terms.front().second;
    return linear_combination(std::move(terms));
}

LegendreSeries multiply(const LegendreSeries& f, const LegendreSeries& g)
{
    if (!(f.interval == g.interval))
        throw DomainError("series live on different intervals");
    if (f.empty() || g.empty())
        return LegendreSeries(f.interval);
    OperatorPtr m = multiplication_matrix(f, 0.5);
    LegendreSeries out(f.interval, m->apply(g.coeffs));
    return out.trim();
}

} // namespace pscont
