#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pscont {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr double machine_eps = std::numeric_limits<double>::epsilon();
inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Closed interval [a, b] with a < b.
struct Interval {
    double a = -1.0;
    double b = 1.0;

    double length() const { return b - a; }
    /// Map x in [a, b] to t in [-1, 1].
    double to_reference(double x) const { return (2.0 * x - a - b) / (b - a); }
    double from_reference(double t) const { return 0.5 * (a + b) + 0.5 * (b - a) * t; }
    bool contains(double x) const { return x >= a && x <= b; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or evaluation outside the domain of an object.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An adaptive procedure hit its resolution cap before converging.
class ResolutionError : public Error {
public:
    ResolutionError(const std::string& what, double last_tail)
        : Error(what), last_tail_(last_tail) {}
    double last_tail() const { return last_tail_; }

private:
    double last_tail_;
};

/// Boundary functionals that admit no recombined basis.
class IllPosedBoundaryError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pscont
