// pscont: resolvent norms and pseudospectra from the command line.
//
//   pscont presets
//   pscont resolvent --preset advdiff --z=-1.05-0.1i
//   pscont grid --preset wiener-hopf --nx 60 --ny 60 --out wh.csv --workers 4
//   pscont compare --preset advdiff --z=-1.05-0.1i --n-values 8,16,32,64,128 --methods continuous,gc,cc
//
// Exit codes: 0 success, 2 config error, 3 resolution failure, 4 I/O error.

#include <pscont/compare.hpp>
#include <pscont/config.hpp>
#include <pscont/expression.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>

using namespace pscont;

namespace {

enum Exit { ok = 0, config_error = 2, resolution_failure = 3, io_error = 4 };

struct Common {
    std::string config_path;
    std::string preset;
    std::optional<std::string> method;
    std::optional<double> delta, c_l, eps, d, eta, fresnel, magnification, reynolds, alpha;
    std::optional<std::size_t> n_max, k_max, n;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> weighting;

    void attach(CLI::App* app)
    {
        app->add_option("-c,--config", config_path, "INI problem file");
        app->add_option("-p,--preset", preset, "built-in problem (see 'presets')");
        app->add_option("--method", method, "continuous or finite_section");
        app->add_option("--delta", delta, "Lanczos relative tolerance");
        app->add_option("--c-l", c_l, "stopping floor constant");
        app->add_option("--eps", eps, "QR tail tolerance");
        app->add_option("--n-max", n_max, "largest QR truncation");
        app->add_option("--k-max", k_max, "Lanczos iteration cap");
        app->add_option("--seed", seed, "start vector seed");
        app->add_option("--n", n, "collocation points for finite_section");
        app->add_option("--weighting", weighting, "none, gc or cc");
        app->add_option("--d", d, "Wiener-Hopf interval length");
        app->add_option("--eta", eta, "advection-diffusion viscosity");
        app->add_option("--fresnel", fresnel, "laser Fresnel number");
        app->add_option("--magnification", magnification, "laser magnification");
        app->add_option("--reynolds", reynolds, "Orr-Sommerfeld Reynolds number");
        app->add_option("--alpha", alpha, "Orr-Sommerfeld wavenumber");
    }

    ProblemConfig resolve() const
    {
        if (config_path.empty() && preset.empty())
            throw ConfigError("give --config or --preset");
        ProblemConfig c;
        if (!config_path.empty()) {
            c = load_config(config_path);
            if (!preset.empty()) {
                c.preset = preset;
                c.family.clear();
            }
        } else {
            c.preset = preset;
        }
        if (method)
            c.method = *method;
        if (delta)
            c.delta = *delta;
        if (c_l)
            c.c_l = *c_l;
        if (eps)
            c.eps = *eps;
        if (n_max)
            c.n_max = *n_max;
        if (k_max)
            c.k_max = *k_max;
        if (seed)
            c.seed = *seed;
        if (n)
            c.n = *n;
        if (weighting)
            c.weighting = weighting_from_string(*weighting);
        if (d)
            c.params.d = *d;
        if (eta)
            c.params.eta = *eta;
        if (fresnel)
            c.params.fresnel = *fresnel;
        if (magnification)
            c.params.magnification = *magnification;
        if (reynolds)
            c.params.reynolds = *reynolds;
        if (alpha)
            c.params.alpha = *alpha;
        // re-validate the merged result
        return parse_config(serialize_config(c));
    }
};

Complex parse_complex(const std::string& text)
{
    // allow 2i and 0.5e-3i as shorthand for 2*i; -z=... reaches us with the '='
    const std::string body = text.starts_with('=') ? text.substr(1) : text;
    const std::string s = std::regex_replace(body, std::regex(R"(([0-9.])i)"), "$1*i");
    const Expression e = Expression::parse(s);
    if (!e.constant())
        throw ConfigError("shift '" + text + "' must be a constant");
    return e(0.0);
}

std::string format_complex(Complex z)
{
    return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
}

FiniteSection finite_section_of(const BuiltProblem& b, const ProblemConfig& c)
{
    if (!b.differential)
        throw ConfigError("finite_section needs a differential problem");
    return discretize_collocation(b.differential->tau, b.differential->bcs, c.n, c.weighting);
}

double baseline_delta(const ProblemConfig& c) { return c.delta > 0.0 ? c.delta : 1e-12; }

int run_resolvent(const ProblemConfig& c, Complex z)
{
    const BuiltProblem b = build_problem(c);
    std::cout << "z = " << format_complex(z) << "\n";
    if (c.method == "finite_section") {
        const FiniteSection fs = finite_section_of(b, c);
        const EigToolResult r = EigToolCore(fs).resolvent_norm(z, baseline_delta(c), c.seed);
        std::cout << "resolvent_norm = " << format_double(r.resolvent_norm) << "\niterations = " << r.iterations
                  << "\ndof = " << fs.matrix.rows() << "\ntermination = "
                  << (r.singular ? "near_singular" : "tolerance") << "\n";
        return ok;
    }
    const RitzResult r = resolvent_norm(*b.problem, z, c.seed, lanczos_options(c));
    std::cout << "resolvent_norm = " << format_double(r.resolvent_norm) << "\niterations = " << r.iterations
              << "\ndof = " << r.dof << "\ntermination = " << to_string(r.termination) << "\n";
    return r.termination == Termination::unresolved ? resolution_failure : ok;
}

struct GridArgs {
    std::optional<double> re_min, re_max, im_min, im_max;
    std::optional<std::size_t> nx, ny;
    std::string out;
    std::string format;
    unsigned workers = 1;
};

int run_grid(const ProblemConfig& c, const GridArgs& g)
{
    const BuiltProblem b = build_problem(c);
    GridSpec spec = b.window;
    if (g.re_min)
        spec.re_min = *g.re_min;
    if (g.re_max)
        spec.re_max = *g.re_max;
    if (g.im_min)
        spec.im_min = *g.im_min;
    if (g.im_max)
        spec.im_max = *g.im_max;
    if (g.nx)
        spec.nx = *g.nx;
    if (g.ny)
        spec.ny = *g.ny;
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    std::string format = g.format;
    if (format.empty())
        format = std::filesystem::path(g.out).extension() == ".json" ? "json" : "csv";

    const auto t0 = std::chrono::steady_clock::now();
    GridResult res;
    if (c.method == "finite_section") {
        FiniteSectionSweepOptions o;
        o.delta = baseline_delta(c);
        o.seed = c.seed;
        o.workers = g.workers;
        res = sweep_finite_section(finite_section_of(b, c), spec, o);
    } else {
        SweepOptions o;
        o.lanczos = lanczos_options(c);
        o.seed = c.seed;
        o.workers = g.workers;
        res = sweep(*b.problem, spec, o);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    export_grid(res, g.out, format);

    double lo = infinity, hi = 0.0;
    std::size_t unresolved = 0, nonconverged = 0;
    for (const GridPoint& p : res.points) {
        lo = std::min(lo, p.resolvent_norm);
        hi = std::max(hi, p.resolvent_norm);
        unresolved += p.flag == Termination::unresolved;
        nonconverged += p.flag == Termination::max_iter;
    }
    std::cout << "points = " << res.points.size() << "\nmin_norm = " << format_double(lo)
              << "\nmax_norm = " << format_double(hi) << "\nunresolved = " << unresolved
              << "\nmax_iter = " << nonconverged << "\nwall_seconds = " << format_double(wall)
              << "\nwritten = " << g.out << "\n";
    return unresolved > 0 ? resolution_failure : ok;
}

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty())
            out.push_back(tok);
    return out;
}

int run_compare(const ProblemConfig& c, Complex z, const std::string& ns_text, const std::string& methods,
                const std::string& reference, const std::string& out)
{
    const BuiltProblem b = build_problem(c);
    if (!b.differential)
        throw ConfigError("compare needs a differential problem");
    std::vector<std::size_t> ns;
    for (const std::string& t : split(ns_text)) {
        std::size_t v = 0;
        auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || end != t.data() + t.size())
            throw ConfigError("--n-values: bad entry '" + t + "'");
        ns.push_back(v);
    }
    CompareTable t;
    try {
        t = compare_methods(*b.differential, z, ns, split(methods), reference, lanczos_options(c), c.seed);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (out.empty()) {
        write_compare_csv(t, std::cout);
    } else {
        std::ofstream f(out);
        if (!f)
            throw IoError("cannot write " + out);
        write_compare_csv(t, f);
        if (!f)
            throw IoError("write failed for " + out);
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Resolvent norms and pseudospectra by operator Lanczos"};
    app.require_subcommand(1);

    app.add_subcommand("presets", "list built-in problems");

    auto* res = app.add_subcommand("resolvent", "resolvent norm at one shift");
    Common res_common;
    res_common.attach(res);
    std::string res_z;
    res->add_option("-z,--z", res_z, "shift, e.g. -1.05-0.1i")->required();

    auto* grid = app.add_subcommand("grid", "sweep a rectangular grid and export the field");
    Common grid_common;
    grid_common.attach(grid);
    GridArgs gargs;
    grid->add_option("--re-min", gargs.re_min);
    grid->add_option("--re-max", gargs.re_max);
    grid->add_option("--im-min", gargs.im_min);
    grid->add_option("--im-max", gargs.im_max);
    grid->add_option("--nx", gargs.nx);
    grid->add_option("--ny", gargs.ny);
    grid->add_option("-o,--out", gargs.out, "output file")->required();
    grid->add_option("--format", gargs.format, "csv or json (default: from extension)");
    grid->add_option("-w,--workers", gargs.workers, "worker threads")->check(CLI::PositiveNumber);

    auto* cmp = app.add_subcommand("compare", "error-versus-n table against a reference method");
    Common cmp_common;
    cmp_common.attach(cmp);
    std::string cmp_z, cmp_ns = "8,16,32,64,128", cmp_methods = "continuous,gc,cc", cmp_ref = "adaptive", cmp_out;
    cmp->add_option("-z,--z", cmp_z, "shift")->required();
    cmp->add_option("--n-values", cmp_ns, "comma separated sizes");
    cmp->add_option("--methods", cmp_methods, "comma separated: adaptive continuous none gc cc");
    cmp->add_option("--reference-method", cmp_ref, "reference for the error columns");
    cmp->add_option("-o,--out", cmp_out, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (app.got_subcommand("presets")) {
            for (const std::string& name : preset_names())
                std::cout << name << "\t" << preset_description(name) << "\n";
            return ok;
        }
        if (app.got_subcommand(res))
            return run_resolvent(res_common.resolve(), parse_complex(res_z));
        if (app.got_subcommand(grid))
            return run_grid(grid_common.resolve(), gargs);
        if (app.got_subcommand(cmp))
            return run_compare(cmp_common.resolve(), parse_complex(cmp_z), cmp_ns, cmp_methods, cmp_ref, cmp_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return io_error;
    } catch (const ResolutionError& e) {
        std::cerr << "resolution failure: " << e.what() << "\n";
        return resolution_failure;
    } catch (const NearSingularError& e) {
        std::cerr << "resolution failure: " << e.what() << "\n";
        return resolution_failure;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    }
    return ok;
}
