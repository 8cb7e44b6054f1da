#include <pscont/compare.hpp>

#include <cmath>
#include <ostream>

namespace pscont {

double method_norm(const DifferentialSpec& spec, Complex z, std::size_t n, const std::string& method,
                   const LanczosOptions& opts, std::uint64_t seed)
{
    if (method == "adaptive" || method == "continuous") {
        LanczosOptions o = opts;
        if (method == "continuous")
            o.solve.fixed_n = n;
        const RitzResult r = resolvent_norm(*build_differential(spec), z, seed, o);
        return r.resolvent_norm;
    }
    const Weighting w = weighting_from_string(method);
    if (n < static_cast<std::size_t>(spec.tau.order()) + 2)
        return std::nan("");
    return dense_resolvent_norm(discretize_collocation(spec.tau, spec.bcs, n, w), z);
}

CompareTable compare_methods(const DifferentialSpec& spec, Complex z, const std::vector<std::size_t>& ns,
                             const std::vector<std::string>& methods, const std::string& reference,
                             const LanczosOptions& opts, std::uint64_t seed)
{
    for (const std::string& m : methods)
        if (m != "adaptive" && m != "continuous")
            weighting_from_string(m);
    CompareTable t;
    t.z = z;
    t.methods = methods;
    t.reference_method = reference;
    t.n = ns;
    const bool fixed_ref = reference == "adaptive";
    const double ref0 = fixed_ref ? method_norm(spec, z, 0, reference, opts, seed) : 0.0;
    for (std::size_t n : ns) {
        const double ref = fixed_ref ? ref0 : method_norm(spec, z, n, reference, opts, seed);
        std::vector<double> norms, errors;
        for (const std::string& m : methods) {
            const double v = m == reference && !fixed_ref ? ref : method_norm(spec, z, n, m, opts, seed);
            norms.push_back(v);
            errors.push_back(std::abs(v - ref) / std::abs(ref));
        }
        t.norms.push_back(std::move(norms));
        t.errors.push_back(std::move(errors));
    }
    return t;
}

void write_compare_csv(const CompareTable& t, std::ostream& out)
{
    out << "n";
    for (const std::string& m : t.methods)
        out << "," << m << "_norm," << m << "_error";
    out << "\n";
    for (std::size_t i = 0; i < t.n.size(); ++i) {
        out << t.n[i];
        for (std::size_t m = 0; m < t.methods.size(); ++m)
            out << "," << format_double(t.norms[i][m]) << "," << format_double(t.errors[i][m]);
        out << "\n";
    }
}

} // namespace pscont
