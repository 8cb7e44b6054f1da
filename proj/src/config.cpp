#include <pscont/config.hpp>

#include <pscont/expression.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace pscont {

namespace pt = boost::property_tree;

namespace {

bool same_grid(const std::optional<GridSpec>& x, const std::optional<GridSpec>& y)
{
    if (x.has_value() != y.has_value())
        return false;
    if (!x)
        return true;
    return x->re_min == y->re_min && x->re_max == y->re_max && x->im_min == y->im_min && x->im_max == y->im_max &&
           x->nx == y->nx && x->ny == y->ny && x->levels == y->levels;
}

bool same_params(const PresetParameters& x, const PresetParameters& y)
{
    return x.d == y.d && x.fresnel == y.fresnel && x.magnification == y.magnification && x.eta == y.eta &&
           x.reynolds == y.reynolds && x.alpha == y.alpha;
}

[[noreturn]] void bad(std::string_view section, std::string_view key, const std::string& what)
{
    std::ostringstream msg;
    msg << "[" << section << "] " << key << ": " << what;
    throw ConfigError(msg.str());
}

double to_double(std::string_view section, std::string_view key, const std::string& v)
{
    try {
        return parse_double(v);
    } catch (const std::exception&) {
        bad(section, key, "expected a number, got '" + v + "'");
    }
}

std::uint64_t to_uint(std::string_view section, std::string_view key, const std::string& v)
{
    std::uint64_t out = 0;
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size())
        bad(section, key, "expected a non-negative integer, got '" + v + "'");
    return out;
}

std::vector<double> to_doubles(std::string_view section, std::string_view key, const std::string& v)
{
    std::vector<double> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok)
        out.push_back(to_double(section, key, tok));
    return out;
}

void parse_problem(const pt::ptree& sec, ProblemConfig& c)
{
    for (const auto& [key, node] : sec) {
        const std::string& v = node.data();
        const char* s = "problem";
        if (key == "preset")
            c.preset = v;
        else if (key == "family")
            c.family = v;
        else if (key == "a")
            c.a = to_double(s, key, v);
        else if (key == "b")
            c.b = to_double(s, key, v);
        else if (key.size() >= 2 && key[0] == 'a' && key.find_first_not_of("0123456789", 1) == std::string::npos)
            c.coefficients[static_cast<int>(to_uint(s, key, key.substr(1)))] = v;
        else if (key == "bcs")
            c.bcs = v;
        else if (key == "adjoint_bcs")
            c.adjoint_bcs = v;
        else if (key == "kernel")
            c.kernel = v;
        else if (key == "scale")
            c.scale = v;
        else if (key == "direction")
            c.direction = v;
        else if (key == "d")
            c.params.d = to_double(s, key, v);
        else if (key == "fresnel")
            c.params.fresnel = to_double(s, key, v);
        else if (key == "magnification")
            c.params.magnification = to_double(s, key, v);
        else if (key == "eta")
            c.params.eta = to_double(s, key, v);
        else if (key == "reynolds")
            c.params.reynolds = to_double(s, key, v);
        else if (key == "alpha")
            c.params.alpha = to_double(s, key, v);
        else
            bad(s, key, "unknown key");
    }
}

void parse_solver(const pt::ptree& sec, ProblemConfig& c)
{
    for (const auto& [key, node] : sec) {
        const std::string& v = node.data();
        const char* s = "solver";
        if (key == "method")
            c.method = v;
        else if (key == "delta")
            c.delta = to_double(s, key, v);
        else if (key == "c_l")
            c.c_l = to_double(s, key, v);
        else if (key == "eps")
            c.eps = to_double(s, key, v);
        else if (key == "n_max")
            c.n_max = to_uint(s, key, v);
        else if (key == "k_max")
            c.k_max = to_uint(s, key, v);
        else if (key == "seed")
            c.seed = to_uint(s, key, v);
        else if (key == "n")
            c.n = to_uint(s, key, v);
        else if (key == "weighting") {
            try {
                c.weighting = weighting_from_string(v);
            } catch (const DomainError& e) {
                bad(s, key, e.what());
            }
        } else
            bad(s, key, "unknown key");
    }
}

void parse_grid(const pt::ptree& sec, ProblemConfig& c)
{
    GridSpec g;
    for (const auto& [key, node] : sec) {
        const std::string& v = node.data();
        const char* s = "grid";
        if (key == "re_min")
            g.re_min = to_double(s, key, v);
        else if (key == "re_max")
            g.re_max = to_double(s, key, v);
        else if (key == "im_min")
            g.im_min = to_double(s, key, v);
        else if (key == "im_max")
            g.im_max = to_double(s, key, v);
        else if (key == "nx")
            g.nx = to_uint(s, key, v);
        else if (key == "ny")
            g.ny = to_uint(s, key, v);
        else if (key == "levels")
            g.levels = to_doubles(s, key, v);
        else
            bad(s, key, "unknown key");
    }
    try {
        g.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("[grid] ") + e.what());
    }
    c.grid = g;
}

void check(const ProblemConfig& c)
{
    if (c.method != "continuous" && c.method != "finite_section")
        bad("solver", "method", "expected continuous or finite_section, got '" + c.method + "'");
    if (!(c.delta >= 0.0))
        bad("solver", "delta", "must be >= 0");
    if (!(c.eps > 0.0))
        bad("solver", "eps", "must be positive");
    if (c.k_max == 0)
        bad("solver", "k_max", "must be positive");
    if (c.preset.empty() == c.family.empty())
        bad("problem", c.preset.empty() ? "family" : "preset", "give exactly one of preset and family");
    if (!c.preset.empty()) {
        try {
            preset_description(c.preset);
        } catch (const DomainError& e) {
            bad("problem", "preset", e.what());
        }
        return;
    }
    if (c.family != "differential" && c.family != "fredholm" && c.family != "volterra")
        bad("problem", "family", "expected differential, fredholm or volterra, got '" + c.family + "'");
    if (!(c.a < c.b))
        bad("problem", "b", "interval needs a < b");
    if (c.family == "differential") {
        if (c.coefficients.empty())
            bad("problem", "a0", "differential family needs coefficients a0, a1, ...");
        if (!c.kernel.empty())
            bad("problem", "kernel", "not used by the differential family");
    } else {
        if (c.kernel.empty())
            bad("problem", "kernel", "required for the " + c.family + " family");
        if (!c.coefficients.empty())
            bad("problem", "a" + std::to_string(c.coefficients.begin()->first), "only for the differential family");
        if (c.method == "finite_section")
            bad("solver", "method", "finite_section needs a differential problem");
    }
    if (c.direction != "left" && c.direction != "right")
        bad("problem", "direction", "expected left or right");
    // surface expression errors at parse time
    for (const auto& [k, e] : c.coefficients)
        Expression::parse(e);
    if (!c.kernel.empty() && Expression::parse(c.kernel).uses('x'))
        bad("problem", "kernel", "use s and t, not x");
    if (!Expression::parse(c.scale).constant())
        bad("problem", "scale", "must be a constant");
    const std::size_t nb = parse_boundary_list(c.bcs).size(), na = parse_boundary_list(c.adjoint_bcs).size();
    if (c.family == "differential") {
        const int order = c.coefficients.rbegin()->first;
        if (nb != static_cast<std::size_t>(order) || na != static_cast<std::size_t>(order))
            bad("problem", "bcs",
                "an order " + std::to_string(order) + " operator needs that many bcs and adjoint_bcs");
    }
}

LegendreSeries coefficient_series(const std::string& text, Interval iv)
{
    const Expression e = Expression::parse(text);
    if (e.uses('s') || e.uses('t'))
        throw ConfigError("coefficient '" + text + "' may only use x");
    if (e.constant())
        return LegendreSeries::constant(iv, e(0.0));
    return approximate([&e](double x) { return e(x); }, iv);
}

} // namespace

bool ProblemConfig::operator==(const ProblemConfig& o) const
{
    return preset == o.preset && family == o.family && a == o.a && b == o.b && coefficients == o.coefficients &&
           bcs == o.bcs && adjoint_bcs == o.adjoint_bcs && kernel == o.kernel && scale == o.scale &&
           direction == o.direction && same_params(params, o.params) && method == o.method && delta == o.delta &&
           c_l == o.c_l && eps == o.eps && n_max == o.n_max && k_max == o.k_max && seed == o.seed && n == o.n &&
           weighting == o.weighting && same_grid(grid, o.grid);
}

std::vector<BoundaryFunctional> parse_boundary_list(std::string_view text)
{
    std::vector<BoundaryFunctional> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        const auto colon = tok.find(':');
        const std::string side = tok.substr(0, colon);
        int deriv = 0;
        if (colon != std::string::npos) {
            const std::string d = tok.substr(colon + 1);
            auto [end, ec] = std::from_chars(d.data(), d.data() + d.size(), deriv);
            if (ec != std::errc() || end != d.data() + d.size() || deriv < 0)
                throw ConfigError("boundary condition '" + tok + "': bad derivative order");
        }
        if (side != "left" && side != "right")
            throw ConfigError("boundary condition '" + tok + "': side must be left or right");
        out.push_back(BoundaryFunctional::value(side == "left" ? BoundaryFunctional::Side::left
                                                               : BoundaryFunctional::Side::right,
                                                deriv));
    }
    return out;
}

ProblemConfig parse_config(std::string_view text)
{
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        std::ostringstream msg;
        msg << "line " << e.line() << ": " << e.message();
        throw ConfigError(msg.str());
    }
    ProblemConfig c;
    for (const auto& [name, sec] : tree) {
        if (sec.empty() && !sec.data().empty())
            throw ConfigError("key '" + name + "' outside a section");
        if (name == "problem")
            parse_problem(sec, c);
        else if (name == "solver")
            parse_solver(sec, c);
        else if (name == "grid")
            parse_grid(sec, c);
        else
            throw ConfigError("unknown section [" + name + "]");
    }
    check(c);
    return c;
}

ProblemConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ProblemConfig& c)
{
    std::ostringstream out;
    out << "[problem]\n";
    if (!c.preset.empty())
        out << "preset = " << c.preset << "\n";
    if (!c.family.empty())
        out << "family = " << c.family << "\n";
    out << "a = " << format_double(c.a) << "\nb = " << format_double(c.b) << "\n";
    for (const auto& [k, e] : c.coefficients)
        out << "a" << k << " = " << e << "\n";
    if (!c.bcs.empty())
        out << "bcs = " << c.bcs << "\n";
    if (!c.adjoint_bcs.empty())
        out << "adjoint_bcs = " << c.adjoint_bcs << "\n";
    if (!c.kernel.empty())
        out << "kernel = " << c.kernel << "\n";
    out << "scale = " << c.scale << "\ndirection = " << c.direction << "\n";
    out << "d = " << format_double(c.params.d) << "\nfresnel = " << format_double(c.params.fresnel)
        << "\nmagnification = " << format_double(c.params.magnification) << "\neta = " << format_double(c.params.eta)
        << "\nreynolds = " << format_double(c.params.reynolds) << "\nalpha = " << format_double(c.params.alpha)
        << "\n";
    out << "\n[solver]\nmethod = " << c.method << "\ndelta = " << format_double(c.delta)
        << "\nc_l = " << format_double(c.c_l) << "\neps = " << format_double(c.eps) << "\nn_max = " << c.n_max
        << "\nk_max = " << c.k_max << "\nseed = " << c.seed << "\nn = " << c.n << "\nweighting = "
        << to_string(c.weighting) << "\n";
    if (c.grid) {
        const GridSpec& g = *c.grid;
        out << "\n[grid]\nre_min = " << format_double(g.re_min) << "\nre_max = " << format_double(g.re_max)
            << "\nim_min = " << format_double(g.im_min) << "\nim_max = " << format_double(g.im_max)
            << "\nnx = " << g.nx << "\nny = " << g.ny << "\nlevels =";
        for (double l : g.levels)
            out << " " << format_double(l);
        out << "\n";
    }
    return out.str();
}

BuiltProblem build_problem(const ProblemConfig& c)
{
    BuiltProblem out;
    if (!c.preset.empty()) {
        Preset p = make_preset(c.preset, c.params);
        out.problem = p.problem;
        out.differential = p.differential;
        out.window = c.grid ? *c.grid : p.window;
        return out;
    }
    const Interval iv{c.a, c.b};
    out.window = c.grid ? *c.grid : GridSpec{};
    if (c.family == "differential") {
        DifferentialSpec s;
        s.tau.interval = iv;
        const int order = c.coefficients.rbegin()->first;
        s.tau.coeffs.assign(static_cast<std::size_t>(order + 1), LegendreSeries(iv));
        for (const auto& [k, e] : c.coefficients)
            s.tau.coeffs[static_cast<std::size_t>(k)] = coefficient_series(e, iv);
        s.bcs = parse_boundary_list(c.bcs);
        s.adjoint_bcs = parse_boundary_list(c.adjoint_bcs);
        out.differential = s;
        out.problem = build_differential(s);
        return out;
    }
    const Expression k = Expression::parse(c.kernel);
    const Complex scale = Expression::parse(c.scale)(0.0);
    BivariateKernelApprox approx = aca_approximate([&k](double s, double t) { return k(s, t); }, iv, iv);
    if (c.family == "fredholm") {
        out.problem = build_fredholm(FredholmSpec{std::move(approx), scale});
    } else {
        VolterraSpec v;
        v.kernel = std::move(approx);
        v.scale = scale;
        v.direction = c.direction == "right" ? VolterraSpec::Direction::right : VolterraSpec::Direction::left;
        out.problem = build_volterra(v);
    }
    return out;
}

LanczosOptions lanczos_options(const ProblemConfig& c)
{
    LanczosOptions o;
    o.delta = c.delta;
    o.c_l = c.c_l;
    o.k_max = c.k_max;
    o.solve.eps = c.eps;
    o.solve.n_max = c.n_max;
    return o;
}

} // namespace pscont
