// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/chronocyclic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/SVD>

#include "fft.hpp"
#include "tfqkd/error.hpp"

namespace tfqkd {

using std::numbers::pi;

UniformGrid::UniformGrid(std::size_t n_points, double span, double center)
    : n_(n_points), span_(span), center_(center)
{
    require(n_points >= 2 && std::has_single_bit(n_points), ErrorCode::InvalidArgument,
            "grid size must be a power of two >= 2");
    require(span > 0.0 && std::isfinite(span), ErrorCode::InvalidArgument, "grid span must be positive");
    require(std::isfinite(center), ErrorCode::InvalidArgument, "grid center must be finite");
}

UniformGrid UniformGrid::dual() const { return UniformGrid(n_, pi / step(), 0.0); }

FrequencyGrid default_grid(const GaussianBandwidths& bw)
{
    require(bw.delta_plus > 0.0 && bw.delta_minus > 0.0, ErrorCode::InvalidArgument,
            "bandwidths must be positive");
    const double wide = std::max(bw.delta_plus, bw.delta_minus);
    const double narrow = std::min(bw.delta_plus, bw.delta_minus);
    const double ratio = wide / narrow;
    // Four widths in frequency (4*wide) and in time (4/narrow): n*dw*dt = 2pi
    // makes the product of half-spans pi*n/2.
    const auto needed = static_cast<std::size_t>(std::ceil(32.0 * ratio / pi));
    const std::size_t n = std::bit_ceil(std::max<std::size_t>(128, needed));
    const double slack = std::sqrt(pi * static_cast<double>(n) / (32.0 * ratio));
    return FrequencyGrid(n, 4.0 * wide * slack, 0.0);
}

JointSpectralAmplitude::JointSpectralAmplitude(Kind kind, std::optional<GaussianBandwidths> bw,
                                               FrequencyGrid grid, ComplexMatrix amplitudes)
    : kind_(kind), bandwidths_(bw), grid_(grid), amplitudes_(std::move(amplitudes))
{
}

JointSpectralAmplitude JointSpectralAmplitude::from_samples(FrequencyGrid grid, ComplexMatrix amplitudes)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    require(amplitudes.rows() == n && amplitudes.cols() == n, ErrorCode::InvalidArgument,
            "amplitude matrix must be n x n for an n-point grid");
    require(amplitudes.allFinite(), ErrorCode::InvalidArgument, "amplitudes must be finite");
    const double norm2 = amplitudes.squaredNorm() * grid.step() * grid.step();
    require(norm2 > 0.0, ErrorCode::InvalidArgument, "amplitude matrix is identically zero");
    amplitudes /= std::sqrt(norm2);
    return JointSpectralAmplitude(Kind::Sampled, std::nullopt, grid, std::move(amplitudes));
}

cplx JointSpectralAmplitude::evaluate(double w, double w_prime) const
{
    require(kind_ == Kind::ParametricGaussian && bandwidths_.has_value(), ErrorCode::InvalidArgument,
            "closed-form evaluation needs a parametric amplitude");
    const double dp = bandwidths_->delta_plus;
    const double dm = bandwidths_->delta_minus;
    const double w_minus = (w - w_prime) / std::numbers::sqrt2;
    const double w_plus = (w + w_prime) / std::numbers::sqrt2;
    const double norm = 1.0 / std::sqrt(pi * dp * dm);
    return norm * std::exp(-w_minus * w_minus / (2 * dp * dp) - w_plus * w_plus / (2 * dm * dm));
}

double JointSpectralAmplitude::norm_squared() const
{
    return amplitudes_.squaredNorm() * grid_.step() * grid_.step();
}

JointSpectralAmplitude make_gaussian_jsa(double delta_plus, double delta_minus, const FrequencyGrid& grid)
{
    require(delta_plus > 0.0 && delta_minus > 0.0, ErrorCode::InvalidArgument,
            "bandwidths must be positive");
    const double needed = 4.0 * std::max(delta_plus, delta_minus);
    if (grid.span() < needed)
        fail(ErrorCode::GridTooSmall, "grid span " + std::to_string(grid.span()) + " is below 4*max(D+, D-) = " +
                                          std::to_string(needed) + "; entropies would be truncation-biased");

    JointSpectralAmplitude jsa(JointSpectralAmplitude::Kind::ParametricGaussian,
                               GaussianBandwidths{delta_plus, delta_minus}, grid, ComplexMatrix());
    const auto n = static_cast<Eigen::Index>(grid.size());
    ComplexMatrix a(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i) a(i, k) = jsa.evaluate(grid.at(i), grid.at(k));
    a /= std::sqrt(a.squaredNorm() * grid.step() * grid.step());
    jsa.amplitudes_ = std::move(a);
    return jsa;
}

JointSpectralAmplitude make_gaussian_jsa(double delta_plus, double delta_minus)
{
    return make_gaussian_jsa(delta_plus, delta_minus, default_grid({delta_plus, delta_minus}));
}

double analytic_schmidt_number(double delta_plus, double delta_minus)
{
    require(delta_plus > 0.0 && delta_minus > 0.0, ErrorCode::InvalidArgument,
            "bandwidths must be positive");
    return 0.5 * (delta_plus / delta_minus + delta_minus / delta_plus);
}

SchmidtDecomposition SchmidtDecomposition::from_singular_values(std::vector<double> values)
{
    for (double v : values)
        require(std::isfinite(v) && v >= 0.0, ErrorCode::Numerical, "singular values must be finite and >= 0");
    std::sort(values.begin(), values.end(), std::greater<>());
    const double sum2 = std::accumulate(values.begin(), values.end(), 0.0,
                                        [](double acc, double v) { return acc + v * v; });
    require(sum2 > 0.0, ErrorCode::Numerical, "all singular values vanish");
    const double scale = 1.0 / std::sqrt(sum2);
    double sum4 = 0.0;
    for (double& v : values) {
        v *= scale;
        sum4 += v * v * v * v;
    }
    return SchmidtDecomposition{std::move(values), 1.0 / sum4};
}

SchmidtDecomposition schmidt_decompose(const ComplexMatrix& amplitudes, double cell)
{
    require(amplitudes.size() > 0, ErrorCode::InvalidArgument, "empty amplitude matrix");
    require(amplitudes.allFinite(), ErrorCode::Numerical, "amplitude matrix has non-finite entries");
    const ComplexMatrix kernel = amplitudes * cell;
    Eigen::BDCSVD<ComplexMatrix> svd(kernel);
    if (svd.info() != Eigen::Success) fail(ErrorCode::Numerical, "singular value decomposition did not converge");
    const Eigen::VectorXd& sv = svd.singularValues();
    return SchmidtDecomposition::from_singular_values(std::vector<double>(sv.data(), sv.data() + sv.size()));
}

SchmidtDecomposition schmidt_decompose(const JointSpectralAmplitude& jsa)
{
    return schmidt_decompose(jsa.amplitudes(), jsa.grid().step());
}

JointTemporalAmplitude::JointTemporalAmplitude(TimeGrid grid, ComplexMatrix amplitudes, TemporalWidths widths)
    : grid_(grid), amplitudes_(std::move(amplitudes)), widths_(widths)
{
    const auto n = static_cast<Eigen::Index>(grid_.size());
    require(amplitudes_.rows() == n && amplitudes_.cols() == n, ErrorCode::InvalidArgument,
            "amplitude matrix must be n x n for an n-point grid");
}

double JointTemporalAmplitude::norm_squared() const
{
    return amplitudes_.squaredNorm() * grid_.step() * grid_.step();
}

TemporalWidths fit_temporal_widths(const TimeGrid& grid, const ComplexMatrix& amplitudes)
{
    double total = 0, sum_p = 0, sum_m = 0, sum_pp = 0, sum_mm = 0;
    for (Eigen::Index k = 0; k < amplitudes.cols(); ++k) {
        for (Eigen::Index i = 0; i < amplitudes.rows(); ++i) {
            const double w = std::norm(amplitudes(i, k));
            const double tp = (grid.at(i) + grid.at(k)) / std::numbers::sqrt2;
            const double tm = (grid.at(i) - grid.at(k)) / std::numbers::sqrt2;
            total += w;
            sum_p += w * tp;
            sum_m += w * tm;
            sum_pp += w * tp * tp;
            sum_mm += w * tm * tm;
        }
    }
    require(total > 0.0, ErrorCode::Numerical, "cannot fit widths of a zero amplitude");
    const double var_p = sum_pp / total - (sum_p / total) * (sum_p / total);
    const double var_m = sum_mm / total - (sum_m / total) * (sum_m / total);
    return {std::sqrt(2.0 * var_p), std::sqrt(2.0 * var_m)};
}

JointTemporalAmplitude to_temporal(const JointSpectralAmplitude& jsa)
{
    const TimeGrid tgrid = jsa.grid().dual();
    ComplexMatrix a = jsa.amplitudes();
    detail::grid_dft_2d(a, jsa.grid(), tgrid, detail::FourierSign::Negative);
    TemporalWidths widths{};
    if (const auto& bw = jsa.bandwidths())
        widths = {1.0 / bw->delta_minus, 1.0 / bw->delta_plus};
    else
        widths = fit_temporal_widths(tgrid, a);
    return JointTemporalAmplitude(tgrid, std::move(a), widths);
}

ComplexMatrix to_spectral(const JointTemporalAmplitude& jta, const FrequencyGrid& frequency_grid)
{
    ComplexMatrix a = jta.amplitudes();
    detail::grid_dft_2d(a, jta.grid(), frequency_grid, detail::FourierSign::Positive);
    return a;
}

std::vector<cplx> spectrum_to_time(std::span<const cplx> spectrum, const FrequencyGrid& grid)
{
    std::vector<cplx> out(spectrum.begin(), spectrum.end());
    detail::grid_dft(out, grid, grid.dual(), detail::FourierSign::Negative);
    return out;
}

std::vector<cplx> time_to_spectrum(std::span<const cplx> field, const TimeGrid& time_grid,
                                   const FrequencyGrid& frequency_grid)
{
    std::vector<cplx> out(field.begin(), field.end());
    detail::grid_dft(out, time_grid, frequency_grid, detail::FourierSign::Positive);
    return out;
}

double stated_alphabet_from_schmidt(double schmidt_number, double beta_plus, double beta_minus)
{
    require(beta_plus > 0.0 && beta_minus > 0.0, ErrorCode::InvalidArgument, "coverage factors must be positive");
    return beta_plus / (2.0 * beta_minus) * schmidt_number;
}

double matched_schmidt_number(int m, double beta_plus, double beta_minus)
{
    require(m >= 1, ErrorCode::InvalidArgument, "alphabet size must be positive");
    return analytic_schmidt_number(beta_plus * m, beta_minus);
}

}  // namespace tfqkd
