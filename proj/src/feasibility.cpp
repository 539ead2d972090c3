// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/feasibility.hpp"

#include <cmath>
#include <numbers>

#include "tfqkd/error.hpp"

namespace tfqkd {

using std::numbers::pi;

namespace {
void require_positive(double x, const char* what)
{
    require(x > 0.0 && std::isfinite(x), ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}
}  // namespace

const char* to_string(FrequencyConvention convention) noexcept
{
    return convention == FrequencyConvention::Angular ? "angular" : "ordinary";
}

const char* to_string(Verdict verdict) noexcept { return verdict == Verdict::Ok ? "ok" : "violated"; }

double wavelength_to_frequency(double wavelength)
{
    require_positive(wavelength, "wavelength");
    return speed_of_light / wavelength;
}

double frequency_to_wavelength(double frequency)
{
    require_positive(frequency, "frequency");
    return speed_of_light / frequency;
}

double wavelength_width_to_frequency_width(double width, double center_wavelength)
{
    require_positive(width, "wavelength width");
    require_positive(center_wavelength, "center wavelength");
    return speed_of_light * width / (center_wavelength * center_wavelength);
}

double frequency_width_to_wavelength_width(double width, double center_wavelength)
{
    require_positive(width, "frequency width");
    require_positive(center_wavelength, "center wavelength");
    return width * center_wavelength * center_wavelength / speed_of_light;
}

double to_angular(double frequency) { return 2.0 * pi * frequency; }
double from_angular(double angular_frequency) { return angular_frequency / (2.0 * pi); }

void HardwareSpec::validate() const
{
    require_positive(center_wavelength, "center wavelength");
    require_positive(spectrometer_resolution.value, "spectrometer resolution");
    require_positive(modulator_max_frequency, "modulator maximum frequency");
    require_positive(modulator_max_depth, "modulator maximum depth");
    require_positive(fiber_gvd, "fiber group-velocity dispersion");
}

double HardwareSpec::resolution_hz() const
{
    if (spectrometer_resolution.unit == SpectrometerResolution::Unit::Hertz) return spectrometer_resolution.value;
    return wavelength_width_to_frequency_width(spectrometer_resolution.value, center_wavelength);
}

FeasibilityReport check_feasibility(int m, double beta_plus, double beta_minus, const HardwareSpec& hw)
{
    hw.validate();
    require(hw.convention.has_value(), ErrorCode::InvalidArgument,
            "hardware frequency convention must be set to angular or ordinary");
    require(m >= 2, ErrorCode::InvalidArgument, "alphabet size must be at least 2");
    require_positive(beta_plus, "beta_plus");
    require_positive(beta_minus, "beta_minus");

    const FrequencyConvention conv = *hw.convention;
    const double dnu = hw.resolution_hz();
    FeasibilityReport r{};
    r.convention = conv;
    r.delta_omega = conv == FrequencyConvention::Angular ? to_angular(dnu) : dnu;
    const double omega = beta_minus * r.delta_omega;
    r.required_depth = beta_plus / beta_minus * m;
    r.required_frequency = conv == FrequencyConvention::Angular ? from_angular(omega) : omega;
    r.phi_ddot = r.required_depth * omega * omega;
    r.required_gvd_total = 1.0 / r.phi_ddot;
    r.fiber_length = r.required_gvd_total / hw.fiber_gvd;
    r.aperture = 1.0 / omega;
    r.depth_verdict = r.required_depth <= hw.modulator_max_depth ? Verdict::Ok : Verdict::Violated;
    r.frequency_verdict = r.required_frequency <= hw.modulator_max_frequency ? Verdict::Ok : Verdict::Violated;
    return r;
}

FeasibilityPair check_feasibility_both(int m, double beta_plus, double beta_minus, const HardwareSpec& hw)
{
    HardwareSpec spec = hw;
    spec.convention = FrequencyConvention::Angular;
    const auto angular = check_feasibility(m, beta_plus, beta_minus, spec);
    spec.convention = FrequencyConvention::Ordinary;
    return {angular, check_feasibility(m, beta_plus, beta_minus, spec)};
}

}  // namespace tfqkd
