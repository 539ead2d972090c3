// SPDX-License-Identifier: Apache-2.0
//
// Entropies of outcome distributions, the entropic uncertainty bound for
// binned time and frequency measurements, and secret-key bounds. All
// entropies are in bits with 0 log 0 = 0.
#pragma once

#include <span>

#include "tfqkd/detection.hpp"

namespace tfqkd {

enum class Direction { BGivenA, AGivenB };

/// Shannon entropy of a probability vector.
double shannon_entropy(std::span<const double> p);

/// h(x) = -x log2 x - (1-x) log2(1-x). Throws Domain outside [0, 1].
double binary_entropy(double x);

double bob_entropy(const OutcomeDistribution& dist);
double alice_entropy(const OutcomeDistribution& dist);
double joint_entropy(const OutcomeDistribution& dist);

/// I_BA = sum p_ba log2(p_ba / (p_b p_a)).
double mutual_information(const OutcomeDistribution& dist);

/// H_{X|Y} = sum_y p_y H_{X|Y=y}.
double conditional_entropy(const OutcomeDistribution& dist, Direction direction = Direction::BGivenA);

struct EntropyReport {
    Basis basis;
    int m;
    double h_b;          ///< Bob's marginal entropy
    double h_b_given_a;  ///< Bob's entropy conditioned on Alice
};

EntropyReport entropy_report(const OutcomeDistribution& dist);

struct KernelSingularValue {
    double numerical;       ///< largest singular value of the discretized kernel
    double analytic;        ///< sqrt(dw dt / 2pi)
    double validity_ratio;  ///< dw / (2 pi phi_ddot / dw)
    bool resolution_warning;  ///< validity_ratio >= 0.1: the analytic value is not guaranteed
};

/// Largest singular value of the strip kernel
///   (dw / 2pi phi) sinc(dw (w' - w'') / 2 phi),  |w' - w_j| <= dw/2,
/// with w'' truncated at the 40th sinc zero and 16 samples per lobe.
KernelSingularValue overlap_kernel_largest_singular_value(double delta_omega, double phi_ddot);
KernelSingularValue overlap_kernel_largest_singular_value(const BinningScheme& binning, const TimeLens& lens);

/// B = -2 log2 sqrt(dw dt / 2pi) = log2(2pi / (dw dt)).
double entropic_bound(double delta_omega, double delta_t);

struct KeyRateBound {
    double bound_b = 0.0;      ///< entropic bound B
    double mutual_info = 0.0;  ///< I_BA in the key (frequency) basis
    double raw_secret_key = 0.0;  ///< min{H_B, B - H~_B|A - H_B|A}, may be negative
    double secret_key = 0.0;   ///< raw value floored at 0
    double deficit = 0.0;      ///< log2 M - B, the binning deficit implied by B
    bool clamped = false;      ///< the H_B branch of the minimum was taken
    bool floored = false;      ///< raw value was negative: no secure key
};

/// Secret-key bound from the key-basis (frequency) and check-basis (time)
/// reports. `reconciliation_efficiency` scales the error-correction cost;
/// 1 reproduces the standard bound.
KeyRateBound secret_key_bound(const EntropyReport& freq, const EntropyReport& time, double bound_b,
                              double reconciliation_efficiency = 1.0);

/// c = -log2(2 pi b+ b-).
double binning_deficit(double beta_plus, double beta_minus);

/// p log2(M-1) + h(p): conditional entropy of the uniform-error channel.
double error_entropy(int m, double p);

/// I_M - 2p log2(M-1) - 2h(p) - c, not floored. The second overload allows a
/// different error probability in the time basis.
double simplified_key_rate(int m, double p, double beta_plus, double beta_minus);
double simplified_key_rate(int m, double p_frequency, double p_time, double beta_plus, double beta_minus);

}  // namespace tfqkd
