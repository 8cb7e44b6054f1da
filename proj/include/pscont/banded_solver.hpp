#pragma once

// Adaptive QR for infinite almost-banded systems A v = u: Householder
// reflectors are applied column by column to A and to the right-hand side,
// and the process stops once the residual tail r[n .. n+b-1] is small
// relative to ||u||.

#include <pscont/spectral.hpp>

namespace pscont {

/// Raised when a pivot of R drops below 1e3 * eps * ||column||.
class NearSingularError : public Error {
public:
    NearSingularError(const std::string& what, std::size_t column) : Error(what), column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

struct SolveOptions {
    double eps = machine_eps;
    std::size_t n_max = std::size_t{1} << 17;
    /// Nonzero: triangularize exactly this many columns, no tail test.
    std::size_t fixed_n = 0;
    double singular_factor = 1e3;
};

struct SolveReport {
    CVector solution;
    std::size_t dof = 0;
    double tail_residual = 0.0;
    double rhs_norm = 0.0;
    bool converged = false;
};

SolveReport adaptive_qr_solve(const ColumnOperator& a, std::span<const Complex> u, const SolveOptions& opts = {});

/// A x over the full finite support of the image.
inline CVector apply(const ColumnOperator& a, std::span<const Complex> x) { return a.apply(x); }

} // namespace pscont
