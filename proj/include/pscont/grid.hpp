#pragma once

// Rectangular grid sweeps of the resolvent norm and the CSV / JSON field
// export consumed by plotting scripts.

#include <pscont/lanczos.hpp>

#include <filesystem>
#include <functional>

namespace pscont {

struct GridSpec {
    double re_min = -1.0, re_max = 1.0;
    double im_min = -1.0, im_max = 1.0;
    std::size_t nx = 2, ny = 2;
    std::vector<double> levels; ///< epsilon values, strictly positive, descending

    void validate() const;
    Complex point(std::size_t ix, std::size_t iy) const;
    std::size_t size() const { return nx * ny; }
};

struct GridPoint {
    Complex z;
    double resolvent_norm = 0.0;
    std::size_t dof = 0;
    std::size_t iterations = 0;
    Termination flag = Termination::tolerance;
};

struct GridMetadata {
    std::uint64_t seed = 0;
    double delta = 0.0;
    double c_l = 100.0;
    std::string method = "continuous";
    std::string version;
};

/// Points in row-major order: im outer, re inner.
struct GridResult {
    GridSpec spec;
    std::vector<GridPoint> points;
    GridMetadata metadata;

    const GridPoint& at(std::size_t ix, std::size_t iy) const { return points[iy * spec.nx + ix]; }
};

/// Per-point seed derived from the global seed and grid index.
std::uint64_t point_seed(std::uint64_t seed, std::size_t ix, std::size_t iy);

struct SweepOptions {
    LanczosOptions lanczos;
    std::uint64_t seed = 2024;
    unsigned workers = 1;
};

using PointEvaluator = std::function<GridPoint(Complex z, std::size_t ix, std::size_t iy)>;

/// Evaluate every point through a shared work queue. Output is independent
/// of the worker count.
std::vector<GridPoint> sweep_points(const GridSpec& spec, const PointEvaluator& eval, unsigned workers);

GridResult sweep(const Problem& problem, const GridSpec& spec, const SweepOptions& opts);

std::string library_version();

/// Shortest decimal that round-trips; "inf" for +infinity.
std::string format_double(double v);
double parse_double(std::string_view s);

void export_csv(const GridResult& result, const std::filesystem::path& path);
void export_json(const GridResult& result, const std::filesystem::path& path);
void export_grid(const GridResult& result, const std::filesystem::path& path, std::string_view format);
/// Reads the CSV rows back; the spec is reconstructed from the point layout.
GridResult import_csv(const std::filesystem::path& path);
GridResult import_json(const std::filesystem::path& path);

} // namespace pscont
