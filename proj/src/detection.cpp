// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "tfqkd/error.hpp"

namespace tfqkd {

using std::numbers::pi;

const char* to_string(Basis basis) noexcept { return basis == Basis::Frequency ? "frequency" : "time"; }

BinningScheme::BinningScheme(int m, double beta_plus, double beta_minus, double delta_omega, double omega_center)
    : m_(m), beta_plus_(beta_plus), beta_minus_(beta_minus), delta_omega_(delta_omega), omega_center_(omega_center)
{
    require(m >= 2, ErrorCode::InvalidArgument, "need at least two detection channels");
    require(beta_minus > 0.0 && beta_minus < beta_plus && beta_plus <= 1.0, ErrorCode::InvalidArgument,
            "coverage factors must satisfy 0 < beta_minus < beta_plus <= 1");
    require(delta_omega > 0.0 && std::isfinite(delta_omega), ErrorCode::InvalidArgument,
            "spectral resolution must be positive");
    require(std::isfinite(omega_center), ErrorCode::InvalidArgument, "center must be finite");
}

double BinningScheme::center(int j) const
{
    require(j >= 1 && j <= m_, ErrorCode::InvalidArgument, "channel index out of range");
    return omega_center_ + (j - 0.5 * (m_ + 1)) * delta_omega_;
}

double BinningScheme::response(int j, double w) const
{
    return std::abs(w - center(j)) <= 0.5 * delta_omega_ ? 1.0 : 0.0;
}

GaussianBandwidths BinningScheme::matched_bandwidths() const noexcept
{
    return {beta_plus_ * span(), beta_minus_ * delta_omega_};
}

TimeLens::TimeLens(double mod_depth, double mod_frequency, double gvd)
    : mod_depth_(mod_depth), mod_frequency_(mod_frequency), gvd_(gvd), phi_ddot_(mod_depth * mod_frequency * mod_frequency)
{
    require(mod_depth >= 0.0 && std::isfinite(mod_depth), ErrorCode::InvalidArgument,
            "modulation depth must be >= 0");
    require(mod_frequency > 0.0 && std::isfinite(mod_frequency), ErrorCode::InvalidArgument,
            "modulator frequency must be positive");
    require(std::isfinite(gvd), ErrorCode::InvalidArgument, "dispersion must be finite");
}

double TimeLens::fraunhofer_mismatch() const noexcept { return std::abs(gvd_ * phi_ddot_ - 1.0); }

double TimeLens::delta_t(double delta_omega) const
{
    require(phi_ddot_ > 0.0, ErrorCode::InvalidArgument, "lens has no phase curvature");
    return delta_omega / phi_ddot_;
}

std::pair<BinningScheme, JointSpectralAmplitude> design_binning(int m, double beta_plus, double beta_minus)
{
    BinningScheme binning(m, beta_plus, beta_minus);
    const auto bw = binning.matched_bandwidths();
    return {binning, make_gaussian_jsa(bw.delta_plus, bw.delta_minus)};
}

TimeLens design_time_lens(int m, double beta_plus, double beta_minus, double delta_omega)
{
    require(m >= 1, ErrorCode::InvalidArgument, "alphabet size must be positive");
    require(beta_plus > 0.0 && beta_minus > 0.0 && delta_omega > 0.0, ErrorCode::InvalidArgument,
            "design parameters must be positive");
    const double omega = beta_minus * delta_omega;
    const double depth = beta_plus / beta_minus * m;
    const double phi_ddot = depth * omega * omega;
    return TimeLens(depth, omega, 1.0 / phi_ddot);
}

TimeLens design_time_lens(const BinningScheme& binning)
{
    return design_time_lens(binning.m(), binning.beta_plus(), binning.beta_minus(), binning.delta_omega());
}

namespace {

double sinc(double y) { return y == 0.0 ? 1.0 : std::sin(y) / y; }

// Fraction of the norm within n/16 cells of either grid edge.
double edge_fraction(std::span<const cplx> v)
{
    const std::size_t n = v.size();
    const std::size_t edge = std::max<std::size_t>(1, n / 16);
    double total = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::norm(v[i]);
        total += w;
        if (i < edge || i >= n - edge) outer += w;
    }
    return total > 0.0 ? outer / total : 0.0;
}

std::vector<double> channel_centers(const BinningScheme& binning)
{
    std::vector<double> c(binning.m());
    for (int j = 1; j <= binning.m(); ++j) c[j - 1] = binning.center(j);
    return c;
}

std::vector<double> time_centers(const BinningScheme& binning, const TimeLens& lens)
{
    std::vector<double> c(binning.m());
    for (int j = 1; j <= binning.m(); ++j) c[j - 1] = time_bin_center(binning, lens, j);
    return c;
}

void require_window(const UniformGrid& grid, std::span<const double> centers, double width, const char* what)
{
    const double lo = centers.front() - 0.5 * width;
    const double hi = centers.back() + 0.5 * width;
    if (lo < grid.lower() || hi > grid.upper())
        fail(ErrorCode::GridMismatch, std::string(what) + " window [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "] exceeds the grid");
}

OutcomeDistribution bin_intensity(const ComplexMatrix& amplitudes, const UniformGrid& grid,
                                  std::span<const double> centers, double width, Basis basis, bool reverse_bob)
{
    const Eigen::MatrixXd w = bin_weights(grid, centers, width);
    const Eigen::MatrixXd intensity = amplitudes.cwiseAbs2();
    const double cell2 = grid.step() * grid.step();
    // raw(a, j) = sum_ik w(a,i) |f(i,k)|^2 w(j,k): Alice rows, Bob physical columns.
    const Eigen::MatrixXd raw = (w * intensity * w.transpose()) * cell2;
    const double inside = raw.sum();
    const double total = intensity.sum() * cell2;
    require(inside > 0.0, ErrorCode::Numerical, "no probability mass inside the detection window");
    const int m = static_cast<int>(centers.size());
    Eigen::MatrixXd p(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) p(b, a) = raw(a, reverse_bob ? m - 1 - b : b) / inside;
    return OutcomeDistribution(basis, std::move(p), std::max(0.0, 1.0 - inside / total));
}

void require_fraunhofer(const TimeLens& lens)
{
    require(lens.phi_ddot() > 0.0 && lens.fraunhofer_mismatch() <= 1e-9, ErrorCode::InvalidArgument,
            "time-basis measurement needs a lens in the Fraunhofer limit (gvd * phi_ddot = 1)");
}

}  // namespace

double time_bin_center(const BinningScheme& binning, const TimeLens& lens, int j)
{
    require(j >= 1 && j <= binning.m(), ErrorCode::InvalidArgument, "channel index out of range");
    return (j - 0.5 * (binning.m() + 1)) * lens.delta_t(binning.delta_omega());
}

namespace {

void apply_lens(std::vector<cplx>& field, const TimeGrid& time_grid, const FrequencyGrid& fgrid, const TimeLens& lens,
                Modulation modulation)
{
    if (lens.gvd() != 0.0) {
        detail::grid_dft(field, time_grid, fgrid, detail::FourierSign::Positive);
        for (std::size_t k = 0; k < field.size(); ++k) {
            const double w = fgrid.at(k);
            field[k] *= std::polar(1.0, -0.5 * lens.gvd() * w * w);
        }
        detail::grid_dft(field, fgrid, time_grid, detail::FourierSign::Negative);
    }
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double t = time_grid.at(i);
        const double phase = modulation == Modulation::IdealQuadratic
                                 ? -0.5 * lens.phi_ddot() * t * t
                                 : lens.mod_depth() * (std::cos(lens.mod_frequency() * t) - 1.0);
        field[i] *= std::polar(1.0, phase);
    }
    detail::grid_dft(field, time_grid, fgrid, detail::FourierSign::Positive);
}

}  // namespace

SpectralField simulate_time_lens(std::span<const cplx> input, const TimeGrid& time_grid, const TimeLens& lens,
                                 Modulation modulation)
{
    require(input.size() == time_grid.size(), ErrorCode::GridMismatch, "input length does not match the time grid");
    if (edge_fraction(input) > 1e-8) fail(ErrorCode::GridMismatch, "input support reaches the edge of the time grid");
    if (modulation == Modulation::Sinusoidal && lens.mod_depth() > 0.0 && lens.aperture() > time_grid.span())
        fail(ErrorCode::GridMismatch, "lens aperture exceeds the time grid");

    const FrequencyGrid fgrid = time_grid.dual();
    std::vector<cplx> field(input.begin(), input.end());
    apply_lens(field, time_grid, fgrid, lens, modulation);
    return {fgrid, std::move(field)};
}

cplx temporal_kernel(const BinningScheme& binning, const TimeLens& lens, int j, double x)
{
    const double phi = lens.phi_ddot();
    require(phi > 0.0, ErrorCode::InvalidArgument, "lens has no phase curvature");
    const double dw = binning.delta_omega();
    const double prefactor = dw / std::sqrt(2.0 * pi * phi);
    return prefactor * std::polar(1.0, -binning.center(j) * x / phi) * sinc(0.5 * x * dw / phi);
}

OutcomeDistribution::OutcomeDistribution(Basis basis, Eigen::MatrixXd probabilities, double outside_mass)
    : basis_(basis), p_(std::move(probabilities)), outside_mass_(outside_mass)
{
    require(p_.rows() >= 2 && p_.rows() == p_.cols(), ErrorCode::InvalidArgument,
            "outcome distribution must be a square matrix with M >= 2");
    require(p_.allFinite() && (p_.array() >= 0.0).all(), ErrorCode::InvalidArgument,
            "probabilities must be finite and nonnegative");
    require(std::abs(p_.sum() - 1.0) <= 1e-9, ErrorCode::InvalidArgument, "probabilities must sum to 1");
}

Eigen::MatrixXd bin_weights(const UniformGrid& grid, std::span<const double> centers, double width)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(centers.size()), n);
    const double h = grid.step();
    for (std::size_t j = 0; j < centers.size(); ++j) {
        const double lo = centers[j] - 0.5 * width;
        const double hi = centers[j] + 0.5 * width;
        const auto first = static_cast<Eigen::Index>(std::max(0.0, std::floor((lo - grid.lower()) / h)));
        const auto last = std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(std::floor((hi - grid.lower()) / h)));
        for (Eigen::Index i = first; i <= last; ++i) {
            const double cell_lo = grid.lower() + static_cast<double>(i) * h;
            const double overlap = std::min(hi, cell_lo + h) - std::max(lo, cell_lo);
            if (overlap > 0.0) w(static_cast<Eigen::Index>(j), i) = overlap / h;
        }
    }
    return w;
}

OutcomeDistribution joint_outcome_distribution(const JointSpectralAmplitude& jsa, const BinningScheme& binning,
                                               const TimeLens& lens, Basis basis, BobLabels labels)
{
    if (basis == Basis::Frequency) {
        const auto centers = channel_centers(binning);
        require_window(jsa.grid(), centers, binning.delta_omega(), "spectral");
        return bin_intensity(jsa.amplitudes(), jsa.grid(), centers, binning.delta_omega(), basis,
                             labels == BobLabels::Correlated);
    }
    require_fraunhofer(lens);
    const auto centers = time_centers(binning, lens);
    const double dt = lens.delta_t(binning.delta_omega());
    const JointTemporalAmplitude jta = to_temporal(jsa);
    require_window(jta.grid(), centers, dt, "temporal");
    return bin_intensity(jta.amplitudes(), jta.grid(), centers, dt, basis, false);
}

OutcomeDistribution time_distribution_via_lens(const JointSpectralAmplitude& jsa, const BinningScheme& binning,
                                               const TimeLens& lens)
{
    require_fraunhofer(lens);
    const JointTemporalAmplitude jta = to_temporal(jsa);
    const auto n = static_cast<Eigen::Index>(jta.grid().size());
    ComplexMatrix a = jta.amplitudes();
    const FrequencyGrid out_grid = jta.grid().dual();
    std::vector<cplx> line(static_cast<std::size_t>(n));
    // Alice's photon (rows), then Bob's (columns).
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) line[i] = a(i, k);
        apply_lens(line, jta.grid(), out_grid, lens, Modulation::IdealQuadratic);
        for (Eigen::Index i = 0; i < n; ++i) a(i, k) = line[i];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) line[k] = a(i, k);
        apply_lens(line, jta.grid(), out_grid, lens, Modulation::IdealQuadratic);
        for (Eigen::Index k = 0; k < n; ++k) a(i, k) = line[k];
    }
    const auto centers = channel_centers(binning);
    require_window(out_grid, centers, binning.delta_omega(), "spectral");
    return bin_intensity(a, out_grid, centers, binning.delta_omega(), Basis::Time, false);
}

std::vector<double> single_photon_distribution(std::span<const cplx> spectrum, const FrequencyGrid& grid,
                                               const BinningScheme& binning, const TimeLens& lens, Basis basis)
{
    require(spectrum.size() == grid.size(), ErrorCode::GridMismatch, "spectrum length does not match grid");
    std::vector<double> centers;
    double width = 0.0;
    UniformGrid used = grid;
    std::vector<cplx> amp(spectrum.begin(), spectrum.end());
    if (basis == Basis::Frequency) {
        centers = channel_centers(binning);
        width = binning.delta_omega();
    } else {
        require_fraunhofer(lens);
        centers = time_centers(binning, lens);
        width = lens.delta_t(binning.delta_omega());
        used = grid.dual();
        amp = spectrum_to_time(spectrum, grid);
    }
    require_window(used, centers, width, basis == Basis::Frequency ? "spectral" : "temporal");
    const Eigen::MatrixXd w = bin_weights(used, centers, width);
    Eigen::VectorXd intensity(static_cast<Eigen::Index>(amp.size()));
    for (std::size_t i = 0; i < amp.size(); ++i) intensity[static_cast<Eigen::Index>(i)] = std::norm(amp[i]);
    const Eigen::VectorXd p = w * intensity;
    const double inside = p.sum();
    require(inside > 0.0, ErrorCode::Numerical, "no probability mass inside the detection window");
    std::vector<double> out(p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) out[j] = p[j] / inside;
    return out;
}

}  // namespace tfqkd
