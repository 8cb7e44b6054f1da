#pragma once

// Error-versus-n tables for a differential problem at one shift.
//
// Methods:
//   adaptive    continuous method, truncation chosen by the solver (n ignored)
//   continuous  continuous method with the QR truncated at exactly n columns
//   none|gc|cc  n-point Chebyshev collocation, weighting as named, dense SVD

#include <pscont/finite_section.hpp>

#include <iosfwd>

namespace pscont {

struct CompareTable {
    Complex z;
    std::vector<std::string> methods;
    std::string reference_method;
    std::vector<std::size_t> n;
    /// norms[i][m], errors[i][m]: row i, method m; NaN where undefined
    std::vector<std::vector<double>> norms, errors;
};

/// DomainError for unknown method names. A reference other than "adaptive"
/// is evaluated at each row's n.
CompareTable compare_methods(const DifferentialSpec& spec, Complex z, const std::vector<std::size_t>& ns,
                             const std::vector<std::string>& methods, const std::string& reference,
                             const LanczosOptions& opts = {}, std::uint64_t seed = 2024);

double method_norm(const DifferentialSpec& spec, Complex z, std::size_t n, const std::string& method,
                   const LanczosOptions& opts = {}, std::uint64_t seed = 2024);

/// Header n,<m>_norm,<m>_error,... then one line per row.
void write_compare_csv(const CompareTable& t, std::ostream& out);

} // namespace pscont
