#pragma once

// Discretize-then-solve baseline: Chebyshev collocation matrices and the
// classical Schur + Lanczos resolvent norm with a ratio stopping test.

#include <pscont/grid.hpp>

#include <Eigen/Dense>

namespace pscont {

enum class Weighting { none, gauss_chebyshev, clenshaw_curtis };

std::string_view to_string(Weighting w);
Weighting weighting_from_string(std::string_view s);

/// Chebyshev–Lobatto points on [a, b] in ascending order.
std::vector<double> chebyshev_points(std::size_t n, Interval iv);
/// Differentiation matrix on chebyshev_points(n, iv).
Eigen::MatrixXd chebyshev_differentiation(std::size_t n, Interval iv);
/// Quadrature weights at chebyshev_points(n, iv).
std::vector<double> clenshaw_curtis_weights(std::size_t n, Interval iv);
std::vector<double> gauss_chebyshev_weights(std::size_t n, Interval iv);

struct FiniteSection {
    Eigen::MatrixXcd matrix;
    /// Diagonal weights for the norm <W u, u>; empty means the plain 2-norm.
    std::vector<double> weight;
    std::vector<double> nodes; ///< collocation nodes that remain unknowns
    std::size_t points = 0;    ///< collocation points before boundary elimination
    Weighting weighting = Weighting::none;
};

/// Collocate tau at n Chebyshev points. Each functional removes the node
/// nearest its endpoint and the matching row; the eliminated values are
/// expressed through the remaining ones.
FiniteSection discretize_collocation(const DifferentialExpression& tau, const std::vector<BoundaryFunctional>& bcs,
                                     std::size_t n, Weighting weighting = Weighting::none);

struct EigToolResult {
    double resolvent_norm = 0.0;
    std::size_t iterations = 0;
    bool singular = false;
};

/// Schur form computed once; each shift costs two triangular solves per step.
class EigToolCore {
public:
    explicit EigToolCore(const FiniteSection& fs);
    EigToolResult resolvent_norm(Complex z, double delta, std::uint64_t seed = 1) const;
    std::size_t size() const { return static_cast<std::size_t>(t_.rows()); }

private:
    Eigen::MatrixXcd t_;
};

/// 1 / s_min of W^{1/2} (z I - L) W^{-1/2} through a dense SVD.
double dense_resolvent_norm(const FiniteSection& fs, Complex z);

struct FiniteSectionSweepOptions {
    double delta = 1e-12;
    std::uint64_t seed = 2024;
    unsigned workers = 1;
};

GridResult sweep_finite_section(const FiniteSection& fs, const GridSpec& spec, const FiniteSectionSweepOptions& opts);

} // namespace pscont
