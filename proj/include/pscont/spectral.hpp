#pragma once

// Infinite matrices in coefficient space, accessed column by column.
//
// Bases: order lambda = 1/2 is the normalized Legendre family on [a, b];
// lambda = N + 1/2 (N >= 1) is the raw ultraspherical family C^(N+1/2)(t)
// in the reference variable t, without re-normalization.

#include <pscont/legendre.hpp>

#include <deque>
#include <memory>
#include <mutex>
#include <span>

namespace pscont {

/// Nonzero window of one column: rows first .. first + values.size() - 1.
struct SparseColumn {
    std::size_t first = 0;
    CVector values;

    std::size_t end() const { return first + values.size(); }
    bool empty() const { return values.empty(); }
    void clear()
    {
        first = 0;
        values.clear();
    }
    /// Add alpha * other, widening the window as needed.
    void add(Complex alpha, const SparseColumn& other);
    Complex at(std::size_t i) const
    {
        return (i >= first && i < end()) ? values[i - first] : Complex{};
    }
};

/// Infinite matrix given by a column generator. Bandwidths bound the
/// nonzero window: column j lives in rows [j - upper, j + lower].
class ColumnOperator {
public:
    virtual ~ColumnOperator() = default;
    virtual void column(std::size_t j, SparseColumn& out) const = 0;
    virtual std::size_t lower_bandwidth() const = 0;
    virtual std::size_t upper_bandwidth() const = 0;

    Complex entry(std::size_t i, std::size_t j) const;
    /// A x for x supported on rows 0 .. x.size() - 1; exact over the support.
    CVector apply(std::span<const Complex> x) const;
    SparseColumn apply(const SparseColumn& x) const;
};

using OperatorPtr = std::shared_ptr<const ColumnOperator>;

OperatorPtr identity_operator(Complex scale = 1.0);

/// C^(lambda) -> C^(lambda+1); lambda = 1/2 starts from normalized Legendre.
OperatorPtr conversion_matrix(double lambda, Interval iv);
/// Chain of conversions from order k + 1/2 to N + 1/2 (identity if k == N).
OperatorPtr conversion_chain(int k, int n, Interval iv);
/// Normalized Legendre coefficients of u -> C^(N+1/2) coefficients of u^(N).
OperatorPtr differentiation_matrix(int order, Interval iv);
/// Multiplication by f acting on C^(lambda) coefficients.
OperatorPtr multiplication_matrix(const LegendreSeries& f, double lambda);
/// u -> int_a^x u
OperatorPtr integration_matrix(Interval iv);
/// u -> int_x^b u  (= (b - a) e_0 e_0^T - J)
OperatorPtr right_integration_matrix(Interval iv);

/// sum_i alpha_i A_i
OperatorPtr linear_combination(std::vector<std::pair<Complex, OperatorPtr>> terms);
/// A_1 A_2 ... A_k (rightmost applied first)
OperatorPtr product(std::vector<OperatorPtr> factors);
/// sum_j C_j R_j^T with C_j, R_j finite coefficient vectors (no conjugation).
OperatorPtr low_rank(std::vector<CVector> left, std::vector<CVector> right);
/// A* read off the rows of A; pass a cached A, each column touches
/// lower + upper + 1 columns of it.
OperatorPtr conjugate_transpose(OperatorPtr a);

/// Memoizes columns of a z-independent operator; safe to share across threads.
class ColumnCache final : public ColumnOperator {
public:
    explicit ColumnCache(OperatorPtr base);
    void column(std::size_t j, SparseColumn& out) const override;
    const SparseColumn& cached(std::size_t j) const;
    std::size_t lower_bandwidth() const override { return base_->lower_bandwidth(); }
    std::size_t upper_bandwidth() const override { return base_->upper_bandwidth(); }

private:
    OperatorPtr base_;
    mutable std::mutex mutex_;
    mutable std::deque<SparseColumn> columns_;
};

OperatorPtr cached(OperatorPtr base);

/// Point functional sum_i w_i u^(d_i)(x_i) with x_i in {a, b}.
struct BoundaryFunctional {
    enum class Side { left, right };
    struct Term {
        Side side;
        int derivative;
        Complex weight;
    };
    std::vector<Term> terms;

    static BoundaryFunctional value(Side side, int derivative = 0)
    {
        return BoundaryFunctional{{Term{side, derivative, 1.0}}};
    }
    /// Value of the functional on p_n.
    Complex on_basis(std::size_t n, Interval iv) const;
};

/// Derivative of order d of p_n at the right (+1) or left (-1) endpoint.
double legendre_endpoint_derivative(std::size_t n, int d, bool right, Interval iv);

/// Recombined basis phi_k = sum_{j=0..N} s_{k,j} p_{k+j}, each phi_k in the
/// null space of all N functionals and of unit L2 norm. As an operator it
/// maps recombined coefficients to Legendre coefficients.
class RecombinedBasis final : public ColumnOperator {
public:
    RecombinedBasis(std::vector<BoundaryFunctional> bcs, Interval iv);
    void column(std::size_t j, SparseColumn& out) const override;
    std::size_t lower_bandwidth() const override { return bcs_.size(); }
    std::size_t upper_bandwidth() const override { return 0; }
    std::size_t order() const { return bcs_.size(); }
    const std::vector<BoundaryFunctional>& functionals() const { return bcs_; }
    Interval interval() const { return iv_; }
    /// Stencil s_{k,0..N}.
    CVector stencil(std::size_t k) const;

private:
    std::vector<BoundaryFunctional> bcs_;
    Interval iv_;
};

/// tau = sum_k a_k(x) d^k/dx^k; coeffs[k] may be empty (zero).
struct DifferentialExpression {
    Interval interval;
    std::vector<LegendreSeries> coeffs;

    int order() const;
    /// tau u evaluated exactly on a Legendre series.
    LegendreSeries apply(const LegendreSeries& u) const;
};

/// Legendre coefficients -> C^(N+1/2) coefficients of tau u, N >= order.
OperatorPtr assemble(const DifferentialExpression& tau, int n);

/// Product f * g of two series on the same interval.
LegendreSeries multiply(const LegendreSeries& f, const LegendreSeries& g);

} // namespace pscont
