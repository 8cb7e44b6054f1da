#include <doctest.h>

#include <pscont/lanczos.hpp>
#include <pscont/presets.hpp>

#include "support.hpp"

#include <Eigen/Eigenvalues>

using namespace pscont;

TEST_CASE("largest Ritz pair against a dense eigensolver")
{
    for (std::size_t c = 0; c < 100; ++c) {
        testgen::Gen g(c);
        const std::size_t k = g.index(1, 50);
        std::vector<double> al(k), be(k - 1);
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            al[i] = g.uniform(-2.0, 5.0);
            t(i, i) = al[i];
        }
        for (std::size_t i = 0; i + 1 < k; ++i) {
            be[i] = g.uniform(0.0, 2.0);
            t(i, i + 1) = t(i + 1, i) = be[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const auto [mu, y] = largest_ritz(al, be);
        const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
        CHECK(std::abs(mu - es.eigenvalues()(k - 1)) <= 1e-13 * scale);
        // the last eigenvector component is only defined up to sign and, for a
        // near-double top eigenvalue, up to rotation; compare when well separated
        if (k == 1 || es.eigenvalues()(k - 1) - es.eigenvalues()(k - 2) > 1e-3 * scale)
            CHECK(std::abs(y - std::abs(es.eigenvectors()(k - 1, k - 1))) <= 1e-9);
    }
    CHECK_THROWS_AS(largest_ritz({}, {}), DomainError);
}

TEST_CASE("termination flag names")
{
    for (Termination t : {Termination::tolerance, Termination::floor, Termination::breakdown, Termination::max_iter,
                          Termination::near_singular, Termination::unresolved})
        CHECK(termination_from_string(to_string(t)) == t);
    CHECK_THROWS_AS(termination_from_string("converged"), DomainError);
}

TEST_CASE("stopping rule")
{
    const Preset p = make_preset("advdiff");
    const Complex z(-1.05, -0.1);

    const RitzResult exact = resolvent_norm(*p.problem, z, 2024);
    CHECK(exact.termination == Termination::floor);
    CHECK(exact.gap <= 0.0);
    CHECK(exact.mu_history.size() == exact.iterations);

    LanczosOptions loose;
    loose.delta = 1e-3;
    const RitzResult quick = resolvent_norm(*p.problem, z, 2024, loose);
    CHECK(quick.termination == Termination::tolerance);
    CHECK(quick.iterations <= exact.iterations);
    CHECK(quick.resolvent_norm <= exact.resolvent_norm * (1 + 1e-14));
    CHECK(quick.resolvent_norm >= exact.resolvent_norm * (1 - 1e-3));

    LanczosOptions capped;
    capped.k_max = 1;
    CHECK(resolvent_norm(*p.problem, z, 2024, capped).termination == Termination::max_iter);

    LanczosOptions starved;
    starved.solve.n_max = 8;
    CHECK(resolvent_norm(*p.problem, z, 2024, starved).termination == Termination::unresolved);
}

TEST_CASE("breakdown on a multiple of the identity")
{
    const Preset p = make_preset("fredholm-zero-kernel");
    const RitzResult r = resolvent_norm(*p.problem, Complex(0.0, 4.0), 1);
    CHECK(r.termination == Termination::breakdown);
    CHECK(r.iterations == 1);
    CHECK(r.resolvent_norm == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("near-singular shifts give infinity")
{
    // d/dx with u(2) = 0 has no spectrum; eta u'' + u' with Dirichlet conditions
    // has eigenvalues, the first near -1/(4 eta) - eta pi^2
    const double eta = 0.015;
    const double lambda = -1.0 / (4.0 * eta) - eta * 3.14159265358979323846 * 3.14159265358979323846;
    PresetParameters params;
    params.eta = eta;
    const Preset p = make_preset("advdiff", params);
    const RitzResult r = resolvent_norm(*p.problem, Complex(lambda), 1);
    CHECK((r.termination == Termination::near_singular || r.resolvent_norm > 1e10));
}

TEST_CASE("reorthogonalization does not change the converged norm")
{
    const Preset p = make_preset("go");
    LanczosOptions plain, reo;
    reo.reorthogonalize = true;
    const double a = resolvent_norm(*p.problem, Complex(0.05, 0.05), 5, plain).resolvent_norm;
    const double b = resolvent_norm(*p.problem, Complex(0.05, 0.05), 5, reo).resolvent_norm;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}
