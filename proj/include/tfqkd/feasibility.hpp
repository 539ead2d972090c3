// SPDX-License-Identifier: Apache-2.0
//
// SI hardware requirements for a designed protocol.
#pragma once

#include <optional>
#include <string>

namespace tfqkd {

inline constexpr double speed_of_light = 299'792'458.0;  // m/s

/// How a spectrometer resolution in hertz is read as the lens parameter
/// delta_omega: as an angular frequency 2 pi dnu, or taken over as dnu itself.
enum class FrequencyConvention { Angular, Ordinary };

const char* to_string(FrequencyConvention convention) noexcept;

// Unit conversions around a carrier wavelength.
double wavelength_to_frequency(double wavelength);
double frequency_to_wavelength(double frequency);
double wavelength_width_to_frequency_width(double width, double center_wavelength);
double frequency_width_to_wavelength_width(double width, double center_wavelength);
double to_angular(double frequency);
double from_angular(double angular_frequency);

struct SpectrometerResolution {
    enum class Unit { Meters, Hertz };
    double value = 2e-9;
    Unit unit = Unit::Meters;
};

struct HardwareSpec {
    double center_wavelength = 1550e-9;             ///< m
    SpectrometerResolution spectrometer_resolution;  ///< wavelength or frequency width
    double modulator_max_frequency = 50e9;          ///< Hz
    double modulator_max_depth = 20.0 * 3.14159265358979323846;  ///< rad
    double fiber_gvd = 3e-26;                       ///< s^2/m (300 fs^2/cm)
    /// Must be chosen explicitly before a single-convention check.
    std::optional<FrequencyConvention> convention;

    /// Throws InvalidArgument unless every quantity is positive and finite.
    void validate() const;
    /// Resolution as an ordinary frequency width in Hz.
    double resolution_hz() const;
};

enum class Verdict { Ok, Violated };

const char* to_string(Verdict verdict) noexcept;

struct FeasibilityReport {
    FrequencyConvention convention;
    double delta_omega;         ///< lens resolution parameter, s^-1
    double required_depth;      ///< rad
    double required_frequency;  ///< modulator drive frequency, Hz
    double phi_ddot;            ///< s^-2
    double required_gvd_total;  ///< s^2
    double fiber_length;        ///< m
    double aperture;            ///< s
    Verdict depth_verdict;
    Verdict frequency_verdict;

    bool feasible() const noexcept { return depth_verdict == Verdict::Ok && frequency_verdict == Verdict::Ok; }
};

/// Omega = b- dw, A = (b+/b-) M, phi_ddot = A Omega^2, gvd = 1/phi_ddot,
/// fiber length = gvd / fiber_gvd. Throws InvalidArgument if hw.convention is
/// unset.
FeasibilityReport check_feasibility(int m, double beta_plus, double beta_minus, const HardwareSpec& hw);

struct FeasibilityPair {
    FeasibilityReport angular;
    FeasibilityReport ordinary;
};

/// Both readings side by side; hw.convention is ignored.
FeasibilityPair check_feasibility_both(int m, double beta_plus, double beta_minus, const HardwareSpec& hw);

}  // namespace tfqkd
