// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tfqkd/error.hpp"

namespace tfqkd {

namespace {
bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }
}  // namespace

void ChannelModel::validate() const
{
    require(is_probability(epsilon), ErrorCode::InvalidArgument, "epsilon must lie in [0, 1]");
    require(is_probability(eta_d), ErrorCode::InvalidArgument, "eta_d must lie in [0, 1]");
    require(is_probability(dark), ErrorCode::InvalidArgument, "dark-count probability must lie in [0, 1]");
    require(length >= 0.0 && std::isfinite(length), ErrorCode::InvalidArgument, "length must be >= 0");
    require(l_att >= 0.0 && std::isfinite(l_att), ErrorCode::InvalidArgument, "attenuation length must be >= 0");
    require(m >= 2, ErrorCode::InvalidArgument, "need at least two detectors per side");
}

double transmission(const ChannelModel& model)
{
    model.validate();
    if (model.length == 0.0) return model.eta_d;
    if (model.l_att == 0.0) return 0.0;
    return model.eta_d * std::exp(-model.length / model.l_att);
}

ErrorProbability error_probability(const ChannelModel& model)
{
    const double eta = transmission(model);
    const double d = model.dark;
    const double m = model.m;
    if (eta == 0.0 || model.epsilon == 0.0) return {d > 0.0 ? (m - 1.0) / m : 0.0, true};
    const double kappa = 2.0 * d * (1.0 - eta) / eta +
                         m * d * d * (1.0 + (1.0 - model.epsilon) / (model.epsilon * eta * eta));
    return {kappa * (m - 1.0) / (kappa * m + 1.0), false};
}

ClickProbabilities pcorrect_pincorrect(const ChannelModel& model)
{
    const double eta = transmission(model);
    const double eps = model.epsilon;
    const double d = model.dark;
    const double m = model.m;
    const double eta_bar = 1.0 - eta;
    const double eps_bar = 1.0 - eps;
    const double quiet = std::pow(1.0 - d, 2.0 * (m - 1.0));
    const double incorrect = 2.0 * eps * eta * eta_bar * (m - 1.0) * d + eps * eta_bar * eta_bar * d * d * m * (m - 1.0) +
                             eps_bar * d * d * m * (m - 1.0);
    const double correct =
        eps * eta * eta + 2.0 * eps * eta * eta_bar * d + eps * eta_bar * eta_bar * d * d * m + eps_bar * d * d * m;
    return {quiet * correct, quiet * incorrect};
}

namespace {

void require_admissible(int m, double p)
{
    require(m >= 2, ErrorCode::InvalidArgument, "alphabet size must be at least 2");
    const double ceiling = (m - 1.0) / m;
    if (!(p >= 0.0 && p <= ceiling * (1.0 + 1e-12)))
        fail(ErrorCode::Domain, "error probability " + std::to_string(p) + " outside the admissible range [0, " +
                                    std::to_string(ceiling) + "]");
}

}  // namespace

OutcomeDistribution error_model_distribution(int m, double p, Basis basis)
{
    require_admissible(m, p);
    const double md = m;
    const double pp = std::min(1.0, md * p / (md - 1.0));
    Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(m, m, pp / (md * md));
    dist.diagonal().array() += (1.0 - pp) / md;
    return OutcomeDistribution(basis, std::move(dist));
}

EntropyReport error_model_entropies(int m, double p, Basis basis)
{
    require_admissible(m, p);
    return {basis, m, std::log2(static_cast<double>(m)), error_entropy(m, std::min(p, 1.0))};
}

}  // namespace tfqkd
