#pragma once

// INI problem files. Three sections, every key optional unless noted:
//
//   [problem]
//   preset = advdiff              ; or family = differential|fredholm|volterra
//   a = 0                         ; interval, inline problems
//   b = 1
//   a0 = 0                        ; differential: tau u = sum a_k u^(k)
//   a1 = 1
//   a2 = 0.015
//   bcs = left right              ; side[:derivative], space separated
//   adjoint_bcs = left right
//   kernel = exp(s - t)           ; fredholm / volterra, variables s and t
//   scale = 1
//   direction = left              ; volterra: left (int_a^s) or right (int_s^b)
//   d = 10                        ; preset parameters: d fresnel magnification
//                                 ; eta reynolds alpha
//   [solver]
//   method = continuous           ; or finite_section
//   delta c_l eps n_max k_max seed n weighting
//   [grid]
//   re_min re_max im_min im_max nx ny levels
//
// Comments start a line with ';' or '#'. Unknown sections and keys are
// rejected.

#include <pscont/finite_section.hpp>
#include <pscont/presets.hpp>

#include <map>
#include <optional>

namespace pscont {

struct ProblemConfig {
    std::string preset;
    std::string family;
    double a = -1.0, b = 1.0;
    std::map<int, std::string> coefficients; ///< derivative order -> expression
    std::string bcs, adjoint_bcs;
    std::string kernel;
    std::string scale = "1";
    std::string direction = "left";
    PresetParameters params;

    std::string method = "continuous";
    double delta = 0.0;
    double c_l = 100.0;
    double eps = machine_eps;
    std::size_t n_max = std::size_t{1} << 17;
    std::size_t k_max = 300;
    std::uint64_t seed = 2024;
    std::size_t n = 60;
    Weighting weighting = Weighting::none;

    std::optional<GridSpec> grid;

    bool operator==(const ProblemConfig&) const;
};

/// ConfigError on malformed text, unknown keys or inconsistent fields.
ProblemConfig parse_config(std::string_view text);
/// IoError when unreadable, ConfigError when malformed.
ProblemConfig load_config(const std::filesystem::path& path);
/// INI text that parses back to an equal config.
std::string serialize_config(const ProblemConfig& cfg);

/// "left right:1" -> value at a, first derivative at b.
std::vector<BoundaryFunctional> parse_boundary_list(std::string_view text);

struct BuiltProblem {
    ProblemPtr problem;
    std::optional<DifferentialSpec> differential;
    GridSpec window;
};

BuiltProblem build_problem(const ProblemConfig& cfg);
LanczosOptions lanczos_options(const ProblemConfig& cfg);

} // namespace pscont
