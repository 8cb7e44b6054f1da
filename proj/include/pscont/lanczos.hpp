#pragma once

// Operator Lanczos iteration on T(z) = R(z)^* R(z) with the adaptive stopping
// rule  beta_{k+1} |y_k| < max(C_L eps mu^{3/2}, delta mu).

#include <pscont/operators.hpp>

#include <string_view>
#include <utility>

namespace pscont {

enum class Termination { tolerance, floor, breakdown, max_iter, near_singular, unresolved };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

struct LanczosOptions {
    double delta = 0.0;
    double c_l = 100.0;
    std::size_t k_max = 300;
    /// Full reorthogonalization; diagnostics only.
    bool reorthogonalize = false;
    SolveOptions solve;
};

struct LanczosState {
    std::vector<double> alphas; ///< alpha_1 .. alpha_k
    std::vector<double> betas;  ///< beta_2 .. beta_{k+1}
    CVector u_prev;
    CVector u_curr;
    std::vector<CVector> basis; ///< kept only when reorthogonalizing
    std::size_t k = 0;
};

struct RitzResult {
    double mu = 0.0;
    double y_last = 1.0;
    std::size_t iterations = 0;
    double resolvent_norm = 0.0;
    Termination termination = Termination::max_iter;
    std::size_t dof = 0;
    /// beta_{k+1} |y_k| minus the threshold at exit (<= 0 when converged).
    double gap = 0.0;
    std::vector<double> mu_history;
};

/// One pass of the three-term recurrence: w = T u_k, alpha_k, beta_{k+1}, u_{k+1}.
void lanczos_step(ResolventApplicator& t, LanczosState& state, bool reorthogonalize = false);

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// alphas and off-diagonal betas[0 .. k-2], and |last component| of its unit
/// eigenvector. Sturm bisection followed by inverse iteration.
std::pair<double, double> largest_ritz(std::span<const double> alphas, std::span<const double> betas);

RitzResult resolvent_norm(ResolventApplicator& t, std::span<const Complex> u1, const LanczosOptions& opts = {});

/// Build the applicator at z, start from problem.start_vector(seed), run.
/// Near-singular shifts give +inf; unresolved solves are flagged.
RitzResult resolvent_norm(const Problem& problem, Complex z, std::uint64_t seed, const LanczosOptions& opts = {});

} // namespace pscont
