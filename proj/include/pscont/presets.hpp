#pragma once

// Built-in problems: the operators used in the numerical experiments plus two
// trivial checks (zero kernel, plain integration).

#include <pscont/operators.hpp>
#include <pscont/grid.hpp>

#include <optional>

namespace pscont {

struct PresetParameters {
    double d = 10.0;                       ///< Wiener–Hopf interval length
    double fresnel = 16.0 * 3.14159265358979323846;
    double magnification = 2.0;
    double eta = 0.015;                    ///< advection–diffusion viscosity
    double reynolds = 10000.0;
    double alpha = 1.02;                   ///< Orr–Sommerfeld wavenumber
};

struct Preset {
    std::string name;
    std::string description;
    ProblemPtr problem;
    /// Present for differential presets; feeds the collocation baseline.
    std::optional<DifferentialSpec> differential;
    GridSpec window;
};

std::vector<std::string> preset_names();
std::string preset_description(std::string_view name);
/// DomainError for an unknown name.
Preset make_preset(std::string_view name, const PresetParameters& params = {});

// Individual builders, shared with tests.
DifferentialSpec first_derivative_spec();
DifferentialSpec advection_diffusion_spec(double eta);
GepSpec orr_sommerfeld_spec(double reynolds, double alpha, bool energy);
FredholmSpec laser_spec(double fresnel, double magnification, bool convolution);
VolterraSpec go_spec();
VolterraSpec wiener_hopf_spec(double d);

/// Kernel of the Huygens–Fresnel operator without the sqrt(iF/pi) factor.
Complex laser_kernel(double s, double t, double fresnel, double magnification, bool convolution);
Complex laser_scale(double fresnel);

} // namespace pscont
