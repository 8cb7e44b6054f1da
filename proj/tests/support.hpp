#pragma once

// Random inputs for property tests. One generator per case, seeded from the
// case index, so a failing case can be replayed alone.

#include <pscont/legendre.hpp>

#include <cmath>
#include <cstdint>

namespace testgen {

using pscont::Complex;
using pscont::CVector;

struct Gen {
    std::uint64_t state;

    explicit Gen(std::uint64_t seed) : state(seed * 0x9e3779b97f4a7c15ull + 0x1234567ull) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform(double lo = 0.0, double hi = 1.0)
    {
        return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    std::size_t index(std::size_t lo, std::size_t hi) { return lo + next() % (hi - lo + 1); }
    Complex complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
    CVector vector(std::size_t n, double decay = 1.0)
    {
        CVector v(n);
        double w = 1.0;
        for (auto& x : v) {
            x = w * complex();
            w *= decay;
        }
        return v;
    }
    pscont::Interval interval()
    {
        const double a = uniform(-3.0, 2.0);
        return {a, a + uniform(0.2, 4.0)};
    }
};

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace testgen
