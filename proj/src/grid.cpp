#include <pscont/grid.hpp>

#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace pscont {

void GridSpec::validate() const
{
    if (nx < 2 || ny < 2)
        throw DomainError("grid needs nx, ny >= 2");
    if (!(re_min < re_max) || !(im_min < im_max))
        throw DomainError("grid ranges need min < max");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0))
            throw DomainError("levels must be positive");
        if (i > 0 && !(levels[i] < levels[i - 1]))
            throw DomainError("levels must be strictly descending");
    }
}

Complex GridSpec::point(std::size_t ix, std::size_t iy) const
{
    const double re = re_min + (re_max - re_min) * static_cast<double>(ix) / static_cast<double>(nx - 1);
    const double im = im_min + (im_max - im_min) * static_cast<double>(iy) / static_cast<double>(ny - 1);
    return {re, im};
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t ix, std::size_t iy)
{
    // splitmix64 over the packed index
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(iy) << 32 | ix));
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<GridPoint> sweep_points(const GridSpec& spec, const PointEvaluator& eval, unsigned workers)
{
    spec.validate();
    std::vector<GridPoint> out(spec.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= out.size())
                return;
            const std::size_t ix = idx % spec.nx, iy = idx / spec.nx;
            try {
                out[idx] = eval(spec.point(ix, iy), ix, iy);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(out.size());
                return;
            }
        }
    };
    const unsigned w = std::max(1u, workers);
    if (w == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < w; ++i)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

GridResult sweep(const Problem& problem, const GridSpec& spec, const SweepOptions& opts)
{
    GridResult res;
    res.spec = spec;
    res.metadata.seed = opts.seed;
    res.metadata.delta = opts.lanczos.delta;
    res.metadata.c_l = opts.lanczos.c_l;
    res.metadata.method = "continuous";
    res.metadata.version = library_version();
    res.points = sweep_points(
        spec,
        [&](Complex z, std::size_t ix, std::size_t iy) {
            GridPoint p;
            p.z = z;
            RitzResult r = resolvent_norm(problem, z, point_seed(opts.seed, ix, iy), opts.lanczos);
            p.resolvent_norm = r.resolvent_norm;
            p.dof = r.dof;
            p.iterations = r.iterations;
            p.flag = r.termination;
            return p;
        },
        opts.workers);
    return res;
}

std::string library_version() { return "0.1.0"; }

std::string format_double(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view s)
{
    if (s == "inf")
        return infinity;
    if (s == "-inf")
        return -infinity;
    if (s == "nan")
        return std::nan("");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("malformed number '" + std::string(s) + "'");
    return v;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path.string() + "' for writing");
    return f;
}

void finish(std::ofstream& f, const std::filesystem::path& path)
{
    f.flush();
    if (!f)
        throw IoError("write to '" + path.string() + "' failed");
}

GridSpec spec_from_points(const std::vector<GridPoint>& pts)
{
    GridSpec spec;
    if (pts.size() < 4)
        throw IoError("grid file needs at least 4 points");
    std::size_t nx = 1;
    while (nx < pts.size() && pts[nx].z.imag() == pts[0].z.imag())
        ++nx;
    if (pts.size() % nx != 0)
        throw IoError("grid file rows do not form a rectangle");
    spec.nx = nx;
    spec.ny = pts.size() / nx;
    spec.re_min = pts.front().z.real();
    spec.re_max = pts[nx - 1].z.real();
    spec.im_min = pts.front().z.imag();
    spec.im_max = pts.back().z.imag();
    return spec;
}

nlohmann::json number_or_inf(double v)
{
    if (std::isfinite(v))
        return v;
    return format_double(v);
}

double json_number(const nlohmann::json& j)
{
    if (j.is_string())
        return parse_double(j.get<std::string>());
    return j.get<double>();
}

} // namespace

void export_csv(const GridResult& r, const std::filesystem::path& path)
{
    std::ofstream f = open_out(path);
    f << "re,im,resolvent_norm,dof,iterations,flag\n";
    for (const GridPoint& p : r.points)
        f << format_double(p.z.real()) << ',' << format_double(p.z.imag()) << ',' << format_double(p.resolvent_norm)
          << ',' << p.dof << ',' << p.iterations << ',' << to_string(p.flag) << '\n';
    finish(f, path);
}

void export_json(const GridResult& r, const std::filesystem::path& path)
{
    nlohmann::json j;
    j["spec"] = {{"re_min", r.spec.re_min}, {"re_max", r.spec.re_max}, {"im_min", r.spec.im_min},
                 {"im_max", r.spec.im_max}, {"nx", r.spec.nx},         {"ny", r.spec.ny},
                 {"levels", r.spec.levels}};
    nlohmann::json pts = nlohmann::json::array();
    for (const GridPoint& p : r.points)
        pts.push_back({p.z.real(), p.z.imag(), number_or_inf(p.resolvent_norm), p.dof, p.iterations,
                       std::string(to_string(p.flag))});
    j["points"] = std::move(pts);
    j["metadata"] = {{"seed", r.metadata.seed},
                     {"delta", r.metadata.delta},
                     {"C_L", r.metadata.c_l},
                     {"version", r.metadata.version},
                     {"method", r.metadata.method}};
    std::ofstream f = open_out(path);
    f << j.dump(1) << '\n';
    finish(f, path);
}

void export_grid(const GridResult& result, const std::filesystem::path& path, std::string_view format)
{
    if (format == "csv")
        export_csv(result, path);
    else if (format == "json")
        export_json(result, path);
    else
        throw IoError("unknown export format '" + std::string(format) + "'");
}

GridResult import_csv(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(f, line) || line != "re,im,resolvent_norm,dof,iterations,flag")
        throw IoError("'" + path.string() + "' lacks the grid header");
    GridResult r;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() != 6)
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
        GridPoint p;
        p.z = {parse_double(cells[0]), parse_double(cells[1])};
        p.resolvent_norm = parse_double(cells[2]);
        p.dof = std::stoull(cells[3]);
        p.iterations = std::stoull(cells[4]);
        p.flag = termination_from_string(cells[5]);
        r.points.push_back(p);
    }
    r.spec = spec_from_points(r.points);
    return r;
}

GridResult import_json(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        f >> j;
        GridResult r;
        const auto& s = j.at("spec");
        r.spec.re_min = s.at("re_min");
        r.spec.re_max = s.at("re_max");
        r.spec.im_min = s.at("im_min");
        r.spec.im_max = s.at("im_max");
        r.spec.nx = s.at("nx");
        r.spec.ny = s.at("ny");
        r.spec.levels = s.at("levels").get<std::vector<double>>();
        for (const auto& row : j.at("points")) {
            GridPoint p;
            p.z = {json_number(row.at(0)), json_number(row.at(1))};
            p.resolvent_norm = json_number(row.at(2));
            p.dof = row.at(3);
            p.iterations = row.at(4);
            p.flag = termination_from_string(row.at(5).get<std::string>());
            r.points.push_back(p);
        }
        const auto& m = j.at("metadata");
        r.metadata.seed = m.at("seed");
        r.metadata.delta = m.at("delta");
        r.metadata.c_l = m.at("C_L");
        r.metadata.version = m.at("version");
        r.metadata.method = m.at("method");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path.string() + "': " + e.what());
    }
}

} // namespace pscont
