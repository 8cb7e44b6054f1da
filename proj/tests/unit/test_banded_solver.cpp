#include <doctest.h>

#include <pscont/banded_solver.hpp>

#include "support.hpp"

#include <Eigen/Dense>

using namespace pscont;

namespace {

/// Tridiagonal with diagonal growing like j, plus a dense first row.
class Growing final : public ColumnOperator {
public:
    explicit Growing(double zero_at = -1.0) : zero_at_(zero_at) {}
    void column(std::size_t j, SparseColumn& out) const override
    {
        out.first = 0;
        out.values.assign(j + 2, Complex{});
        out.values[0] = 0.5;
        if (j > 0)
            out.values[j - 1] += Complex(0.0, 1.0);
        out.values[j] = static_cast<double>(j) == zero_at_ ? Complex{} : Complex(2.0 + j, 0.5);
        out.values[j + 1] = -1.0;
    }
    std::size_t lower_bandwidth() const override { return 1; }
    std::size_t upper_bandwidth() const override { return 1 << 30; }

private:
    double zero_at_;
};

} // namespace

TEST_CASE("identity solve")
{
    const auto id = identity_operator(2.0);
    const CVector u{1.0, Complex(0, 2), 0.0, 0.0};
    const SolveReport r = adaptive_qr_solve(*id, u);
    CHECK(r.converged);
    REQUIRE(r.solution.size() >= 2);
    CHECK(std::abs(r.solution[0] - 0.5) < 1e-15);
    CHECK(std::abs(r.solution[1] - Complex(0, 1)) < 1e-15);
    CHECK(adaptive_qr_solve(*id, CVector{}).converged);
}

TEST_CASE("solution agrees with a dense solve of a large section")
{
    const Growing a;
    for (std::size_t c = 0; c < 100; ++c) {
        testgen::Gen g(c);
        const CVector u = g.vector(g.index(1, 20), 0.9);
        const SolveReport r = adaptive_qr_solve(a, u);
        const int m = 300;
        Eigen::MatrixXcd dense(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                dense(i, j) = a.entry(i, j);
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
        for (std::size_t i = 0; i < u.size(); ++i)
            rhs(static_cast<int>(i)) = u[i];
        const Eigen::VectorXcd x = dense.partialPivLu().solve(rhs);
        double err = 0.0;
        for (int i = 0; i < m; ++i) {
            const Complex v = static_cast<std::size_t>(i) < r.solution.size() ? r.solution[i] : Complex{};
            err = std::max(err, std::abs(v - x(i)));
        }
        CHECK(err < 1e-13 * x.norm());
        CHECK(r.tail_residual < machine_eps * r.rhs_norm);
        CHECK(r.dof == r.solution.size());
    }
}

TEST_CASE("fixed truncation and resolution cap")
{
    const Growing a;
    const CVector u{1.0, 1.0};
    SolveOptions o;
    o.fixed_n = 7;
    CHECK(adaptive_qr_solve(a, u, o).dof == 7);
    o.fixed_n = 0;
    o.n_max = 3;
    CHECK_THROWS_AS(adaptive_qr_solve(a, u, o), ResolutionError);
    o.eps = 0.0;
    CHECK_THROWS_AS(adaptive_qr_solve(a, u, o), DomainError);
}

TEST_CASE("near-singular pivots are reported with their column")
{
    class Singular final : public ColumnOperator {
    public:
        void column(std::size_t j, SparseColumn& out) const override
        {
            out.first = j;
            out.values = {j == 3 ? Complex{} : Complex(1.0 + j)};
        }
        std::size_t lower_bandwidth() const override { return 0; }
        std::size_t upper_bandwidth() const override { return 0; }
    } s;
    const CVector u{1.0, 1.0, 1.0, 1.0, 1.0};
    try {
        adaptive_qr_solve(s, u);
        FAIL("expected NearSingularError");
    } catch (const NearSingularError& e) {
        CHECK(e.column() == 3);
    }
}
