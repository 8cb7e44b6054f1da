#include <pscont/banded_solver.hpp>

#include <pscont/kernels.hpp>

#include <cmath>
#include <sstream>

namespace pscont {

namespace {

struct RColumn {
    std::size_t first;
    CVector values; // rows first .. k, diagonal last
};

void reflect(std::span<const Complex> w, std::span<Complex> x)
{
    const Complex c = kernels::dot(w, x);
    if (c != Complex{})
        kernels::axpy(-2.0 * c, w, x);
}

} // namespace

SolveReport adaptive_qr_solve(const ColumnOperator& a, std::span<const Complex> u, const SolveOptions& opts)
{
    if (!(opts.eps > 0.0))
        throw DomainError("solver tolerance must be positive");
    const std::size_t b = a.lower_bandwidth();
    std::size_t n_u = u.size();
    while (n_u > 0 && u[n_u - 1] == Complex{})
        --n_u;

    SolveReport rep;
    rep.rhs_norm = kernels::norm2(u.first(n_u));
    if (rep.rhs_norm == 0.0) {
        rep.converged = true;
        return rep;
    }

    std::vector<CVector> refl;
    std::vector<RColumn> rcols;
    CVector r(u.begin(), u.begin() + static_cast<long>(n_u));
    const std::size_t n_cap = opts.fixed_n > 0 ? opts.fixed_n : opts.n_max;

    SparseColumn col;
    CVector x;
    std::size_t n = 0;
    double tail = infinity;
    for (std::size_t k = 0;; ++k) {
        if (k >= n_cap) {
            if (opts.fixed_n > 0)
                break;
            std::ostringstream msg;
            msg << "adaptive QR did not converge within " << opts.n_max << " columns (tail " << tail << ")";
            throw ResolutionError(msg.str(), tail);
        }
        if (refl.size() == refl.capacity()) {
            refl.reserve(std::max<std::size_t>(64, 2 * refl.capacity()));
            rcols.reserve(refl.capacity());
        }
        a.column(k, col);
        const double col_norm = kernels::norm2(col.values);
        const std::size_t top = col.empty() ? k : std::min(k, col.first >= b ? col.first - b : 0);
        const std::size_t bottom = k + b + 1;
        if (!col.empty() && col.end() > bottom)
            throw DomainError("column exceeds the declared lower bandwidth");
        x.assign(bottom - top, Complex{});
        for (std::size_t i = 0; i < col.values.size(); ++i)
            x[col.first + i - top] = col.values[i];
        for (std::size_t j = top; j < k; ++j)
            reflect(refl[j], std::span<Complex>(x).subspan(j - top, b + 1));

        std::span<Complex> seg = std::span<Complex>(x).subspan(k - top, b + 1);
        const double alpha = kernels::norm2(seg);
        if (!(alpha > opts.singular_factor * machine_eps * col_norm) || alpha == 0.0) {
            std::ostringstream msg;
            msg << "near-singular pivot at column " << k;
            throw NearSingularError(msg.str(), k);
        }
        const Complex phase = seg[0] == Complex{} ? Complex(1.0) : seg[0] / std::abs(seg[0]);
        CVector w(seg.begin(), seg.end());
        w[0] += phase * alpha;
        const double wn = kernels::norm2(w);
        kernels::scale(1.0 / wn, w);

        RColumn rc{top, CVector(x.begin(), x.begin() + static_cast<long>(k - top + 1))};
        rc.values.back() = -phase * alpha;
        rcols.push_back(std::move(rc));

        if (r.size() < bottom)
            r.resize(bottom);
        reflect(w, std::span<Complex>(r).subspan(k, b + 1));
        refl.push_back(std::move(w));

        n = k + 1;
        tail = kernels::norm2(std::span<const Complex>(r).subspan(n, b));
        if (opts.fixed_n == 0 && n >= n_u && tail < opts.eps * rep.rhs_norm)
            break;
    }

    // back substitution, column oriented
    CVector v(r.begin(), r.begin() + static_cast<long>(n));
    for (std::size_t k = n; k-- > 0;) {
        const RColumn& rc = rcols[k];
        v[k] /= rc.values.back();
        const std::size_t len = k - rc.first;
        if (len > 0)
            kernels::axpy(-v[k], std::span<const Complex>(rc.values).first(len),
                          std::span<Complex>(v).subspan(rc.first, len));
    }
    rep.solution = std::move(v);
    rep.dof = n;
    rep.tail_residual = tail;
    rep.converged = tail < opts.eps * rep.rhs_norm;
    return rep;
}

} // namespace pscont
