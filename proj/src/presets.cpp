#include <pscont/presets.hpp>

#include <cmath>

namespace pscont {

namespace {

using BF = BoundaryFunctional;

struct Entry {
    const char* name;
    const char* description;
};

constexpr Entry entries[] = {
    {"first-derivative", "d/dx on [0,2], u(2) = 0"},
    {"advdiff", "eta u'' + u' on [0,1], Dirichlet (eta = 0.015)"},
    {"laser", "Huygens-Fresnel operator, unstable resonator (F = 16 pi, M = 2)"},
    {"laser-conv", "Huygens-Fresnel operator of convolution type (F = 16 pi)"},
    {"go", "Volterra operator with Gaussian separable kernel on [0,1]"},
    {"wiener-hopf", "int_s^d e^(s-t) u(t) dt on [0,d] (d = 10)"},
    {"orr-sommerfeld", "Orr-Sommerfeld pencil, R = 10000, alpha = 1.02, 2-norm"},
    {"orr-sommerfeld-energy", "Orr-Sommerfeld pencil in the energy norm <B u, v>"},
    {"fredholm-zero-kernel", "zero kernel on [-1,1]; resolvent norm 1/|z|"},
    {"volterra-integration", "int_0^s u(t) dt on [0,1]"},
};

GridSpec window(double re0, double re1, double im0, double im1)
{
    GridSpec g;
    g.re_min = re0;
    g.re_max = re1;
    g.im_min = im0;
    g.im_max = im1;
    g.nx = 60;
    g.ny = 60;
    g.levels = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    return g;
}

LegendreSeries series_of(Interval iv, const ScalarFunction& f) { return approximate(f, iv); }

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> out;
    for (const Entry& e : entries)
        out.emplace_back(e.name);
    return out;
}

std::string preset_description(std::string_view name)
{
    for (const Entry& e : entries)
        if (name == e.name)
            return e.description;
    throw DomainError("unknown preset '" + std::string(name) + "'");
}

DifferentialSpec first_derivative_spec()
{
    const Interval iv{0.0, 2.0};
    DifferentialSpec s;
    s.tau = {iv, {LegendreSeries(iv), LegendreSeries::constant(iv, 1.0)}};
    s.bcs = {BF::value(BF::Side::right)};
    s.adjoint_bcs = {BF::value(BF::Side::left)};
    return s;
}

DifferentialSpec advection_diffusion_spec(double eta)
{
    const Interval iv{0.0, 1.0};
    DifferentialSpec s;
    s.tau = {iv, {LegendreSeries(iv), LegendreSeries::constant(iv, 1.0), LegendreSeries::constant(iv, eta)}};
    s.bcs = {BF::value(BF::Side::left), BF::value(BF::Side::right)};
    s.adjoint_bcs = s.bcs;
    return s;
}

GepSpec orr_sommerfeld_spec(double reynolds, double alpha, bool energy)
{
    const Interval iv{-1.0, 1.0};
    const LegendreSeries x = LegendreSeries::identity(iv);
    const LegendreSeries one = LegendreSeries::constant(iv, 1.0);
    const LegendreSeries flow = one - multiply(x, x);
    const Complex i{0.0, 1.0};
    const double a2 = alpha * alpha;

    GepSpec g;
    g.a.tau.interval = iv;
    g.a.tau.coeffs.assign(5, LegendreSeries(iv));
    g.a.tau.coeffs[4] = LegendreSeries::constant(iv, -1.0 / reynolds);
    g.a.tau.coeffs[2] = LegendreSeries::constant(iv, 2.0 * a2 / reynolds) + (i * alpha) * flow;
    g.a.tau.coeffs[0] = LegendreSeries::constant(iv, -a2 * a2 / reynolds + 2.0 * i * alpha) + (-i * alpha * a2) * flow;
    g.a.bcs = {BF::value(BF::Side::left), BF::value(BF::Side::right), BF::value(BF::Side::left, 1),
               BF::value(BF::Side::right, 1)};
    g.a.adjoint_bcs = g.a.bcs;
    g.b = {iv, {LegendreSeries::constant(iv, a2), LegendreSeries(iv), LegendreSeries::constant(iv, -1.0)}};
    g.energy_norm = energy;
    if (energy)
        g.b_bcs = {BF::value(BF::Side::left), BF::value(BF::Side::right)};
    return g;
}

Complex laser_kernel(double s, double t, double fresnel, double magnification, bool convolution)
{
    const Complex i{0.0, 1.0};
    if (convolution)
        return std::exp(-i * fresnel * (s - t) * (s - t));
    const double r = s / magnification - t;
    return std::exp(-i * fresnel * magnification * r * r);
}

Complex laser_scale(double fresnel) { return std::sqrt(Complex(0.0, fresnel / 3.14159265358979323846)); }

FredholmSpec laser_spec(double fresnel, double magnification, bool convolution)
{
    const Interval iv{-1.0, 1.0};
    FredholmSpec f;
    AcaOptions aca;
    aca.tol = 1e-11; // evaluation roundoff grows with the phase F M
    f.kernel = aca_approximate(
        [=](double s, double t) { return laser_kernel(s, t, fresnel, magnification, convolution); }, iv, iv, aca);
    f.scale = laser_scale(fresnel);
    return f;
}

VolterraSpec go_spec()
{
    const Interval iv{0.0, 1.0};
    const auto bump = [](double x) { return Complex(std::exp(-10.0 * (x - 1.0 / 3.0) * (x - 1.0 / 3.0))); };
    VolterraSpec v;
    v.kernel = separable_kernel(series_of(iv, bump), series_of(iv, bump));
    v.direction = VolterraSpec::Direction::left;
    return v;
}

VolterraSpec wiener_hopf_spec(double d)
{
    if (!(d > 0.0))
        throw DomainError("Wiener-Hopf length d must be positive");
    const Interval iv{0.0, d};
    VolterraSpec v;
    v.kernel = separable_kernel(series_of(iv, [](double s) { return Complex(std::exp(s)); }),
                                series_of(iv, [](double t) { return Complex(std::exp(-t)); }));
    v.direction = VolterraSpec::Direction::right;
    return v;
}

Preset make_preset(std::string_view name, const PresetParameters& p)
{
    Preset out;
    out.name = std::string(name);
    out.description = preset_description(name);
    if (name == "first-derivative") {
        out.differential = first_derivative_spec();
        out.problem = build_differential(*out.differential);
        out.window = window(-8.0, -1.0, -10.0, 10.0);
        out.window.nx = out.window.ny = 40;
    } else if (name == "advdiff") {
        out.differential = advection_diffusion_spec(p.eta);
        out.problem = build_differential(*out.differential);
        out.window = window(-2.5, 0.5, -1.5, 1.5);
    } else if (name == "laser" || name == "laser-conv") {
        out.problem = build_fredholm(laser_spec(p.fresnel, p.magnification, name == "laser-conv"));
        out.window = window(-1.2, 1.2, -1.2, 1.2);
        out.window.levels = {1e-1, std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3};
    } else if (name == "go") {
        out.problem = build_volterra(go_spec());
        out.window = window(-0.1, 0.2, -0.15, 0.15);
    } else if (name == "wiener-hopf") {
        out.problem = build_volterra(wiener_hopf_spec(p.d));
        out.window = window(-0.2, 1.2, -0.7, 0.7);
    } else if (name == "orr-sommerfeld" || name == "orr-sommerfeld-energy") {
        out.problem = build_gep(orr_sommerfeld_spec(p.reynolds, p.alpha, name == "orr-sommerfeld-energy"));
        out.window = window(-1.0, 0.1, -1.0, 0.0);
    } else if (name == "fredholm-zero-kernel") {
        const Interval iv{-1.0, 1.0};
        FredholmSpec f;
        f.kernel = separable_kernel(LegendreSeries::constant(iv, 0.0), LegendreSeries::constant(iv, 0.0));
        out.problem = build_fredholm(f);
        out.window = window(0.5, 2.5, -1.0, 1.0);
    } else if (name == "volterra-integration") {
        const Interval iv{0.0, 1.0};
        VolterraSpec v;
        v.kernel = separable_kernel(LegendreSeries::constant(iv, 1.0), LegendreSeries::constant(iv, 1.0));
        out.problem = build_volterra(v);
        out.window = window(-0.5, 1.0, -0.75, 0.75);
    }
    return out;
}

} // namespace pscont
