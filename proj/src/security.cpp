// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/SVD>

#include "tfqkd/error.hpp"

namespace tfqkd {

using std::numbers::pi;

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double entropy_of(const Eigen::VectorXd& p)
{
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) h += plogp(p[i]);
    return h;
}

}  // namespace

double shannon_entropy(std::span<const double> p)
{
    double h = 0.0;
    for (double x : p) {
        require(x >= 0.0 && std::isfinite(x), ErrorCode::Domain, "probabilities must be nonnegative");
        h += plogp(x);
    }
    return h;
}

double binary_entropy(double x)
{
    require(x >= 0.0 && x <= 1.0, ErrorCode::Domain, "binary entropy needs 0 <= x <= 1");
    return plogp(x) + plogp(1.0 - x);
}

double bob_entropy(const OutcomeDistribution& dist) { return entropy_of(dist.bob_marginal()); }
double alice_entropy(const OutcomeDistribution& dist) { return entropy_of(dist.alice_marginal()); }

double joint_entropy(const OutcomeDistribution& dist)
{
    const auto& p = dist.probabilities();
    double h = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j)
        for (Eigen::Index i = 0; i < p.rows(); ++i) h += plogp(p(i, j));
    return h;
}

double mutual_information(const OutcomeDistribution& dist)
{
    const auto& p = dist.probabilities();
    const Eigen::VectorXd pb = dist.bob_marginal();
    const Eigen::VectorXd pa = dist.alice_marginal();
    double info = 0.0;
    for (Eigen::Index a = 0; a < p.cols(); ++a)
        for (Eigen::Index b = 0; b < p.rows(); ++b)
            if (p(b, a) > 0.0) info += p(b, a) * std::log2(p(b, a) / (pb[b] * pa[a]));
    return info;
}

double conditional_entropy(const OutcomeDistribution& dist, Direction direction)
{
    const auto& p = dist.probabilities();
    const bool b_given_a = direction == Direction::BGivenA;
    const Eigen::VectorXd given = b_given_a ? dist.alice_marginal() : dist.bob_marginal();
    double h = 0.0;
    for (Eigen::Index y = 0; y < given.size(); ++y) {
        if (given[y] <= 0.0) continue;
        double hy = 0.0;
        for (Eigen::Index x = 0; x < given.size(); ++x) hy += plogp((b_given_a ? p(x, y) : p(y, x)) / given[y]);
        h += given[y] * hy;
    }
    return h;
}

EntropyReport entropy_report(const OutcomeDistribution& dist)
{
    return {dist.basis(), dist.m(), bob_entropy(dist), conditional_entropy(dist, Direction::BGivenA)};
}

KernelSingularValue overlap_kernel_largest_singular_value(double delta_omega, double phi_ddot)
{
    require(delta_omega > 0.0 && phi_ddot > 0.0, ErrorCode::InvalidArgument,
            "resolution and phase curvature must be positive");
    constexpr int strip_points = 64;
    constexpr int zeros = 40;
    constexpr int per_lobe = 16;
    const double lobe = 2.0 * pi * phi_ddot / delta_omega;
    const int band_points = 2 * zeros * per_lobe;
    const double h_strip = delta_omega / strip_points;
    const double h_band = lobe / per_lobe;
    const double amplitude = delta_omega / (2.0 * pi * phi_ddot);
    const double weight = std::sqrt(h_strip * h_band);

    Eigen::MatrixXd kernel(strip_points, band_points);
    for (int k = 0; k < band_points; ++k) {
        const double w2 = -zeros * lobe + (k + 0.5) * h_band;
        for (int i = 0; i < strip_points; ++i) {
            const double w1 = -0.5 * delta_omega + (i + 0.5) * h_strip;
            const double y = 0.5 * delta_omega * (w1 - w2) / phi_ddot;
            kernel(i, k) = weight * amplitude * (y == 0.0 ? 1.0 : std::sin(y) / y);
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(kernel);
    if (svd.info() != Eigen::Success) fail(ErrorCode::Numerical, "kernel singular value decomposition failed");

    const double delta_t = delta_omega / phi_ddot;
    const double ratio = delta_omega / lobe;
    return {svd.singularValues()[0], std::sqrt(delta_omega * delta_t / (2.0 * pi)), ratio, ratio >= 0.1};
}

KernelSingularValue overlap_kernel_largest_singular_value(const BinningScheme& binning, const TimeLens& lens)
{
    return overlap_kernel_largest_singular_value(binning.delta_omega(), lens.phi_ddot());
}

double entropic_bound(double delta_omega, double delta_t)
{
    require(delta_omega > 0.0 && delta_t > 0.0, ErrorCode::InvalidArgument, "resolutions must be positive");
    return std::log2(2.0 * pi / (delta_omega * delta_t));
}

KeyRateBound secret_key_bound(const EntropyReport& freq, const EntropyReport& time, double bound_b,
                              double reconciliation_efficiency)
{
    require(freq.m == time.m, ErrorCode::InvalidArgument, "reports must share the alphabet size");
    require(reconciliation_efficiency > 0.0 && reconciliation_efficiency <= 1.0, ErrorCode::InvalidArgument,
            "reconciliation efficiency must lie in (0, 1]");
    const double beta = reconciliation_efficiency;
    KeyRateBound k;
    k.bound_b = bound_b;
    k.mutual_info = freq.h_b - freq.h_b_given_a;
    const double entropic =
        bound_b - time.h_b_given_a - beta * freq.h_b_given_a - (1.0 - beta) * freq.h_b;
    k.clamped = freq.h_b <= entropic;
    k.raw_secret_key = std::min(freq.h_b, entropic);
    k.floored = k.raw_secret_key < 0.0;
    k.secret_key = std::max(0.0, k.raw_secret_key);
    k.deficit = std::log2(static_cast<double>(freq.m)) - bound_b;
    return k;
}

double binning_deficit(double beta_plus, double beta_minus)
{
    require(beta_plus > 0.0 && beta_minus > 0.0, ErrorCode::InvalidArgument, "coverage factors must be positive");
    return -std::log2(2.0 * pi * beta_plus * beta_minus);
}

double error_entropy(int m, double p)
{
    require(m >= 2, ErrorCode::InvalidArgument, "alphabet size must be at least 2");
    require(p >= 0.0 && p <= 1.0, ErrorCode::Domain, "error probability must lie in [0, 1]");
    return p * std::log2(m - 1.0) + binary_entropy(p);
}

double simplified_key_rate(int m, double p, double beta_plus, double beta_minus)
{
    return simplified_key_rate(m, p, p, beta_plus, beta_minus);
}

double simplified_key_rate(int m, double p_frequency, double p_time, double beta_plus, double beta_minus)
{
    return std::log2(static_cast<double>(m)) - error_entropy(m, p_frequency) - error_entropy(m, p_time) -
           binning_deficit(beta_plus, beta_minus);
}

}  // namespace tfqkd
