// SPDX-License-Identifier: Apache-2.0
//
// Two-photon joint spectral and temporal amplitudes.
//
// Units are normalized so that the spectrometer resolution is 1: angular
// frequencies are multiples of the resolution and times are in units of its
// inverse. Matrices are indexed (Alice, Bob), i.e. row i is Alice's detuning
// grid point and column k is Bob's.
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tfqkd {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Uniform midpoint grid over [center - span, center + span] with n_points
/// cells. Used for both detunings and times.
class UniformGrid {
public:
    /// Throws InvalidArgument unless n is a power of two >= 2 and span > 0.
    UniformGrid(std::size_t n_points, double span, double center = 0.0);

    std::size_t size() const noexcept { return n_; }
    double span() const noexcept { return span_; }
    double center() const noexcept { return center_; }
    double step() const noexcept { return 2.0 * span_ / static_cast<double>(n_); }
    double lower() const noexcept { return center_ - span_; }
    double upper() const noexcept { return center_ + span_; }
    double at(std::size_t i) const noexcept
    {
        return lower() + (static_cast<double>(i) + 0.5) * step();
    }

    /// Fourier-dual grid: same size, step 2*pi/(n*step), centered on zero.
    UniformGrid dual() const;

    bool operator==(const UniformGrid&) const = default;

private:
    std::size_t n_;
    double span_;
    double center_;
};

using FrequencyGrid = UniformGrid;
using TimeGrid = UniformGrid;

/// Bandwidths of the correlated Gaussian source.
struct GaussianBandwidths {
    double delta_plus;   ///< marginal bandwidth, width along (w - w')/sqrt2
    double delta_minus;  ///< correlation bandwidth, width along (w + w')/sqrt2
};

/// Default grid for a Gaussian source: covers at least four widths in both the
/// spectral and the temporal domain, with the two half-spans in ratio
/// delta_plus*delta_minus (the matched time-lens curvature).
FrequencyGrid default_grid(const GaussianBandwidths& bw);

class JointSpectralAmplitude {
public:
    enum class Kind { ParametricGaussian, Sampled };

    /// Wraps a sampled matrix; rescales it to unit L2 norm. Throws
    /// InvalidArgument on shape mismatch or an all-zero matrix.
    static JointSpectralAmplitude from_samples(FrequencyGrid grid, ComplexMatrix amplitudes);

    Kind kind() const noexcept { return kind_; }
    const std::optional<GaussianBandwidths>& bandwidths() const noexcept { return bandwidths_; }
    const FrequencyGrid& grid() const noexcept { return grid_; }
    const ComplexMatrix& amplitudes() const noexcept { return amplitudes_; }

    /// Closed-form amplitude; only valid for the parametric kind.
    cplx evaluate(double w, double w_prime) const;

    /// sum |f|^2 dw^2 over the grid.
    double norm_squared() const;

private:
    friend JointSpectralAmplitude make_gaussian_jsa(double, double, const FrequencyGrid&);
    JointSpectralAmplitude(Kind kind, std::optional<GaussianBandwidths> bw, FrequencyGrid grid,
                           ComplexMatrix amplitudes);

    Kind kind_;
    std::optional<GaussianBandwidths> bandwidths_;
    FrequencyGrid grid_;
    ComplexMatrix amplitudes_;
};

/// Normalized Gaussian correlated spectrum
///   f = (pi D+ D-)^(-1/2) exp(-w_-^2 / 2D+^2 - w_+^2 / 2D-^2),  w_(+/-) = (w +/- w')/sqrt2,
/// sampled on `grid`. Throws GridTooSmall unless grid.span() >= 4*max(D+, D-).
JointSpectralAmplitude make_gaussian_jsa(double delta_plus, double delta_minus, const FrequencyGrid& grid);
JointSpectralAmplitude make_gaussian_jsa(double delta_plus, double delta_minus);

/// (D+/D- + D-/D+)/2
double analytic_schmidt_number(double delta_plus, double delta_minus);

struct SchmidtDecomposition {
    std::vector<double> singular_values;  ///< nonincreasing, sum of squares 1
    double schmidt_number = 1.0;          ///< 1 / sum lambda^4

    /// Builds from raw singular values: sorts, rescales, computes K.
    static SchmidtDecomposition from_singular_values(std::vector<double> values);
};

/// Singular values of a sampled two-photon amplitude with cell size `cell`.
/// Throws Numerical if the decomposition does not converge.
SchmidtDecomposition schmidt_decompose(const ComplexMatrix& amplitudes, double cell);
SchmidtDecomposition schmidt_decompose(const JointSpectralAmplitude& jsa);

struct TemporalWidths {
    double t_plus;   ///< width along (t + t')/sqrt2
    double t_minus;  ///< width along (t - t')/sqrt2
};

class JointTemporalAmplitude {
public:
    JointTemporalAmplitude(TimeGrid grid, ComplexMatrix amplitudes, TemporalWidths widths);

    const TimeGrid& grid() const noexcept { return grid_; }
    const ComplexMatrix& amplitudes() const noexcept { return amplitudes_; }
    /// Analytic widths T+ = 1/D-, T- = 1/D+ for a Gaussian source, else fitted.
    double t_plus() const noexcept { return widths_.t_plus; }
    double t_minus() const noexcept { return widths_.t_minus; }

    double norm_squared() const;

private:
    TimeGrid grid_;
    ComplexMatrix amplitudes_;
    TemporalWidths widths_;
};

/// Gaussian-equivalent widths from the second moments of |f~|^2 along the
/// rotated axes: T = sqrt(2 var).
TemporalWidths fit_temporal_widths(const TimeGrid& grid, const ComplexMatrix& amplitudes);

/// f~(t, t') = (1/2pi) \iint f(w, w') exp(-i(w t + w' t')) dw dw', discretized as a
/// unitary 2D DFT between the midpoint frequency grid and its dual time grid.
JointTemporalAmplitude to_temporal(const JointSpectralAmplitude& jsa);

/// Inverse of to_temporal, back onto `frequency_grid` (whose dual must be the
/// amplitude's time grid).
ComplexMatrix to_spectral(const JointTemporalAmplitude& jta, const FrequencyGrid& frequency_grid);

// One-dimensional versions of the same transforms.
std::vector<cplx> spectrum_to_time(std::span<const cplx> spectrum, const FrequencyGrid& grid);
std::vector<cplx> time_to_spectrum(std::span<const cplx> field, const TimeGrid& time_grid,
                                   const FrequencyGrid& frequency_grid);

/// Alphabet size from the relation M = (b+/2b-) K.
double stated_alphabet_from_schmidt(double schmidt_number, double beta_plus, double beta_minus);
/// Schmidt number implied by the matched design D- = b-, D+ = b+ M; for M >> 1
/// this is K ~ (b+/2b-) M, the inverse of stated_alphabet_from_schmidt.
double matched_schmidt_number(int m, double beta_plus, double beta_minus);

}  // namespace tfqkd
