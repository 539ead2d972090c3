// SPDX-License-Identifier: Apache-2.0
//
// Closed-form loss and dark-count model for a source placed midway between
// Alice and Bob, each leg of length L.
#pragma once

#include "tfqkd/detection.hpp"
#include "tfqkd/security.hpp"

namespace tfqkd {

struct ChannelModel {
    double epsilon = 0.1;  ///< pair-emission probability per run
    double eta_d = 0.25;   ///< detector efficiency including coupling
    double length = 1.0;   ///< per-leg channel length
    double l_att = 1.0;    ///< attenuation length, same units as length
    double dark = 1e-6;    ///< dark-count probability per detector per run
    int m = 16;            ///< detectors per side

    /// Throws InvalidArgument on probabilities outside [0, 1], negative
    /// lengths, or M < 2.
    void validate() const;
};

/// eta = eta_d exp(-L / L_att).
double transmission(const ChannelModel& model);

struct ErrorProbability {
    double p = 0.0;
    /// No pair can be registered (eta = 0 or epsilon = 0): p is the pure-noise
    /// floor (M-1)/M when dark counts are present, else 0.
    bool degenerate = false;
};

/// p = kappa (M-1) / (kappa M + 1) with
/// kappa = 2d(1-eta)/eta + M d^2 (1 + (1-epsilon)/(epsilon eta^2)).
ErrorProbability error_probability(const ChannelModel& model);

struct ClickProbabilities {
    double p_correct = 0.0;
    double p_incorrect = 0.0;

    double error_probability() const { return p_incorrect / (p_correct + p_incorrect); }
};

/// Per-run probabilities of a single click on each side with matching or
/// mismatching channels, including the (1-d)^(2(M-1)) factor.
ClickProbabilities pcorrect_pincorrect(const ChannelModel& model);

/// p_ba = [(1 - p') delta_ba + p'/M] / M with p' = M p / (M-1). Throws Domain
/// if p is outside [0, (M-1)/M].
OutcomeDistribution error_model_distribution(int m, double p, Basis basis = Basis::Frequency);

/// Entropies of error_model_distribution without building the M x M matrix:
/// H_B = log2 M and H_B|A = error_entropy(m, p). Same domain as above.
EntropyReport error_model_entropies(int m, double p, Basis basis = Basis::Frequency);

}  // namespace tfqkd
