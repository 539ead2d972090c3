// SPDX-License-Identifier: Apache-2.0
//
// Photon-counting spectrometers, the time-to-frequency converter, and binned
// joint outcome distributions in the two conjugate bases.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tfqkd/chronocyclic.hpp"

namespace tfqkd {

enum class Basis { Frequency, Time };

const char* to_string(Basis basis) noexcept;

/// M top-hat channels of width delta_omega, centers
/// w_j = omega_center + [j - (M+1)/2] delta_omega for j = 1..M.
class BinningScheme {
public:
    /// Throws InvalidArgument unless M >= 2, 0 < beta_minus < beta_plus <= 1
    /// and delta_omega > 0.
    BinningScheme(int m, double beta_plus, double beta_minus, double delta_omega = 1.0,
                  double omega_center = 0.0);

    int m() const noexcept { return m_; }
    double delta_omega() const noexcept { return delta_omega_; }
    double beta_plus() const noexcept { return beta_plus_; }
    double beta_minus() const noexcept { return beta_minus_; }
    double omega_center() const noexcept { return omega_center_; }

    /// Total span M * delta_omega.
    double span() const noexcept { return m_ * delta_omega_; }
    /// 1-based channel center.
    double center(int j) const;
    /// Top-hat response F_j(w).
    double response(int j, double w) const;

    /// Matched source bandwidths: D- = b- dw, D+ = b+ M dw.
    GaussianBandwidths matched_bandwidths() const noexcept;

private:
    int m_;
    double beta_plus_;
    double beta_minus_;
    double delta_omega_;
    double omega_center_;
};

/// Dispersion followed by a phase modulator A cos(Omega t).
class TimeLens {
public:
    /// phi_ddot = A * Omega^2, aperture = 1/Omega.
    TimeLens(double mod_depth, double mod_frequency, double gvd);

    double phi_ddot() const noexcept { return phi_ddot_; }
    double mod_frequency() const noexcept { return mod_frequency_; }
    double mod_depth() const noexcept { return mod_depth_; }
    double gvd() const noexcept { return gvd_; }
    double aperture() const noexcept { return 1.0 / mod_frequency_; }

    /// |gvd * phi_ddot - 1|; zero in the spectral Fraunhofer limit.
    double fraunhofer_mismatch() const noexcept;
    /// Temporal resolution delta_omega / phi_ddot.
    double delta_t(double delta_omega) const;

private:
    double mod_depth_;
    double mod_frequency_;
    double gvd_;
    double phi_ddot_;
};

/// Binning scheme and the source matched to it.
std::pair<BinningScheme, JointSpectralAmplitude> design_binning(int m, double beta_plus, double beta_minus);

/// Omega = b- dw, A = (b+/b-) M, phi_ddot = A Omega^2 = b+ b- M dw^2,
/// gvd = 1/phi_ddot. The raw overload accepts any positive coverage factors.
TimeLens design_time_lens(const BinningScheme& binning);
TimeLens design_time_lens(int m, double beta_plus, double beta_minus, double delta_omega = 1.0);

enum class Modulation { IdealQuadratic, Sinusoidal };

struct SpectralField {
    FrequencyGrid grid;
    std::vector<cplx> amplitudes;
};

/// Propagates a temporal wavefunction through the lens: spectral phase
/// exp(-i gvd w^2 / 2), then temporal phase exp(i phi(t)) with
/// phi = -phi_ddot t^2/2 (ideal) or A cos(Omega t) - A (sinusoidal), then to the
/// output spectrum on time_grid.dual(). Throws GridMismatch if the input
/// reaches the grid edges or, for sinusoidal modulation, the aperture does not
/// fit in the grid.
SpectralField simulate_time_lens(std::span<const cplx> input, const TimeGrid& time_grid, const TimeLens& lens,
                                 Modulation modulation);

/// Fourier transform of the top-hat channel j:
/// dw (2 pi phi_ddot)^(-1/2) exp(-i w_j x / phi_ddot) sinc(x dw / 2 phi_ddot).
cplx temporal_kernel(const BinningScheme& binning, const TimeLens& lens, int j, double x);

/// Center of time bin j (1-based): [j - (M+1)/2] delta_t.
double time_bin_center(const BinningScheme& binning, const TimeLens& lens, int j);

/// Joint click probabilities p_ba (row b = Bob, column a = Alice), normalized
/// over the M x M coincidence window.
class OutcomeDistribution {
public:
    /// Validates nonnegativity and unit sum (1e-9).
    OutcomeDistribution(Basis basis, Eigen::MatrixXd probabilities, double outside_mass = 0.0);

    Basis basis() const noexcept { return basis_; }
    int m() const noexcept { return static_cast<int>(p_.rows()); }
    const Eigen::MatrixXd& probabilities() const noexcept { return p_; }
    /// 0-based access p(b, a).
    double operator()(int b, int a) const { return p_(b, a); }

    Eigen::VectorXd bob_marginal() const { return p_.rowwise().sum(); }
    Eigen::VectorXd alice_marginal() const { return p_.colwise().sum().transpose(); }

    /// Amplitude mass that fell outside the window before renormalization.
    double outside_mass() const noexcept { return outside_mass_; }
    /// More than 1% of the mass was postselected away.
    bool coverage_warning() const noexcept { return outside_mass_ > 0.01; }

private:
    Basis basis_;
    Eigen::MatrixXd p_;
    double outside_mass_;
};

enum class BobLabels {
    Correlated,  ///< frequency channels relabeled b -> M+1-b so correlated events sit on b = a
    Physical,    ///< raw detector indices
};

/// Bins |f|^2 (frequency) or |f~|^2 (time, bin width delta_t, centers
/// mirroring the spectral layout) over the M x M window. Out-of-window mass is
/// discarded and reported. Throws GridMismatch if the grid does not cover the
/// window and InvalidArgument if the lens is not in the Fraunhofer limit.
OutcomeDistribution joint_outcome_distribution(const JointSpectralAmplitude& jsa, const BinningScheme& binning,
                                               const TimeLens& lens, Basis basis,
                                               BobLabels labels = BobLabels::Correlated);

/// Time-basis distribution computed the long way: both photons' temporal
/// amplitudes are sent through simulate_time_lens (ideal quadratic) and the
/// output spectra are binned with the spectrometer channels.
OutcomeDistribution time_distribution_via_lens(const JointSpectralAmplitude& jsa, const BinningScheme& binning,
                                               const TimeLens& lens);

/// Single-photon click distribution over Bob's M channels in either basis for
/// a pure spectral amplitude on `grid`, renormalized over the window.
std::vector<double> single_photon_distribution(std::span<const cplx> spectrum, const FrequencyGrid& grid,
                                               const BinningScheme& binning, const TimeLens& lens, Basis basis);

/// M x n matrix of overlaps between grid cells and the bins [c_j - w/2, c_j + w/2],
/// in units of the cell width.
Eigen::MatrixXd bin_weights(const UniformGrid& grid, std::span<const double> centers, double width);

}  // namespace tfqkd
