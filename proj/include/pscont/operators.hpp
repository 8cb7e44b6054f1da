#pragma once

// Operator families and their resolvent applicators. An applicator at a
// shift z provides v = R(z) u and w = R(z)^* v, so that one Lanczos step
// applies T(z) = R(z)^* R(z).

#include <pscont/aca.hpp>
#include <pscont/banded_solver.hpp>

#include <cstdint>
#include <memory>
#include <string>

namespace pscont {

/// tau u = sum_k a_k u^(k) with boundary functionals. The adjoint expression
/// defaults to the formal adjoint; adjoint boundary functionals must be given.
struct DifferentialSpec {
    DifferentialExpression tau;
    std::vector<BoundaryFunctional> bcs;
    std::vector<BoundaryFunctional> adjoint_bcs;
    DifferentialExpression adjoint_tau; ///< empty coeffs: use formal_adjoint(tau)
};

/// A x = lambda B x with A carrying the boundary functionals (order N > M).
struct GepSpec {
    DifferentialSpec a;
    DifferentialExpression b;
    DifferentialExpression adjoint_b; ///< empty coeffs: use formal_adjoint(b)
    /// Energy inner product <B phi, psi>; the start vector then lives in
    /// the span of a basis satisfying b_bcs.
    bool energy_norm = false;
    std::vector<BoundaryFunctional> b_bcs;
};

/// (F u)(s) = scale * int_a^b K(s, t) u(t) dt
struct FredholmSpec {
    BivariateKernelApprox kernel;
    Complex scale = 1.0;
};

/// Left: (V u)(s) = scale * int_a^s K(s,t) u(t) dt.
/// Right: (V u)(s) = scale * int_s^b K(s,t) u(t) dt.
struct VolterraSpec {
    enum class Direction { left, right };
    BivariateKernelApprox kernel;
    Direction direction = Direction::left;
    Complex scale = 1.0;
};

/// Coefficients of tau* = sum_k (-1)^k d^k (conj(a_k) .) in descending form.
DifferentialExpression formal_adjoint(const DifferentialExpression& tau);

class ResolventApplicator {
public:
    virtual ~ResolventApplicator() = default;

    Complex z() const { return z_; }
    /// R(z) u in Legendre coefficients.
    virtual CVector forward(std::span<const Complex> u) = 0;
    /// R(z)^* v, adjoint in the problem's inner product.
    virtual CVector adjoint(std::span<const Complex> v) = 0;
    CVector apply(std::span<const Complex> u) { return adjoint(forward(u)); }

    virtual Complex inner(std::span<const Complex> x, std::span<const Complex> y) const;
    double norm(std::span<const Complex> x) const;
    /// Largest truncation size over all solves so far.
    std::size_t max_dof() const { return max_dof_; }

protected:
    explicit ResolventApplicator(Complex z) : z_(z) {}
    void record_dof(std::size_t n) { max_dof_ = std::max(max_dof_, n); }

private:
    Complex z_;
    std::size_t max_dof_ = 0;
};

class Problem {
public:
    virtual ~Problem() = default;
    virtual Interval interval() const = 0;
    virtual std::string family() const = 0;
    virtual std::unique_ptr<ResolventApplicator> at(Complex z, const SolveOptions& opts = {}) const = 0;
    /// 32 pseudo-random coefficients decaying like 0.9^k, unit norm in the
    /// problem's inner product.
    virtual CVector start_vector(std::uint64_t seed) const;
    virtual Complex inner(std::span<const Complex> x, std::span<const Complex> y) const;
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// Raw decaying random coefficients (not normalized).
CVector random_coefficients(std::uint64_t seed, std::size_t n = 32, double decay = 0.9);

ProblemPtr build_differential(const DifferentialSpec& spec);
ProblemPtr build_gep(const GepSpec& spec);

enum class FredholmRoute { woodbury, qr };
ProblemPtr build_fredholm(const FredholmSpec& spec, FredholmRoute route = FredholmRoute::woodbury);
ProblemPtr build_volterra(const VolterraSpec& spec);

/// Matrix representation z I - C R^T of a Fredholm shift (for the QR route and tests).
OperatorPtr fredholm_rep(const FredholmSpec& spec, Complex z);
/// Matrix representation of the Volterra operator itself (no shift).
OperatorPtr volterra_rep(const VolterraSpec& spec);

/// Column j = z B e_j - A e_j.
OperatorPtr shifted_pencil(Complex z, OperatorPtr b, OperatorPtr a);

} // namespace pscont
