// SPDX-License-Identifier: Apache-2.0
//
// Round-by-round protocol simulation: emission, loss, dark counts,
// single-click postselection and basis sifting.
#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "tfqkd/noise.hpp"
#include "tfqkd/security.hpp"

namespace tfqkd {

enum class MultiClickPolicy {
    Discard,       ///< keep only rounds with exactly one click per side
    RandomAssign,  ///< pick one of several clicks uniformly
};

enum class CorrelationModel {
    IdealDelta,  ///< both photons land in the same (relabeled) channel
    SampledJsa,  ///< channel pair drawn from the binned source distribution
};

struct SimulationConfig {
    std::uint64_t rounds = 1'000'000;
    std::uint64_t seed = 1;
    double basis_prob = 0.5;  ///< probability of choosing the frequency basis
    MultiClickPolicy multi_click_policy = MultiClickPolicy::Discard;
    CorrelationModel correlation_model = CorrelationModel::IdealDelta;
    unsigned threads = 1;

    void validate() const;
};

using CountMatrix = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Mergeable event counts. Every round lands in exactly one of no_click,
/// multi_click_discarded, basis_mismatch and sifted.
struct RoundLedger {
    int m = 0;
    std::uint64_t rounds = 0;
    std::uint64_t no_click = 0;
    std::uint64_t multi_click_discarded = 0;
    std::uint64_t basis_mismatch = 0;
    std::uint64_t sifted = 0;
    std::uint64_t basis_matched_rounds = 0;  ///< rounds with equal bases, clicks or not
    std::uint64_t correct = 0;               ///< sifted with b = a
    std::uint64_t incorrect = 0;             ///< sifted with b != a
    std::array<std::uint64_t, 2> sifted_by_basis{};
    std::array<CountMatrix, 2> joint_counts;  ///< indexed by Basis, (b, a)

    explicit RoundLedger(int m = 0);

    std::uint64_t coincidences() const noexcept { return basis_mismatch + sifted; }
    const CountMatrix& counts(Basis basis) const { return joint_counts[static_cast<int>(basis)]; }

    RoundLedger& merge(const RoundLedger& other);
    bool operator==(const RoundLedger& other) const;
};

/// Runs config.rounds independent rounds. Round r draws from
/// CounterRng(seed, r), so results do not depend on config.threads. The
/// source amplitude is needed only for the sampled-jsa model.
RoundLedger simulate_rounds(const SimulationConfig& config, const ChannelModel& channel,
                            const BinningScheme& binning, const JointSpectralAmplitude* jsa = nullptr);

struct EmpiricalDistribution {
    OutcomeDistribution distribution;
    Eigen::MatrixXd std_error;  ///< sqrt(p(1-p)/n) per entry
    std::uint64_t samples;
};

/// Normalized counts. Throws EmptyBasis if nothing was sifted in that basis.
EmpiricalDistribution empirical_distribution(const RoundLedger& ledger, Basis basis);

struct Estimate {
    double value;
    double std_error;
    std::uint64_t samples;
};

/// incorrect / sifted.
Estimate empirical_error_probability(const RoundLedger& ledger);
/// correct / basis-matched rounds and incorrect / basis-matched rounds.
Estimate empirical_p_correct(const RoundLedger& ledger);
Estimate empirical_p_incorrect(const RoundLedger& ledger);

/// Empirical entropies of both bases fed into secret_key_bound with B from
/// the lens resolutions.
KeyRateBound estimate_key_rate(const RoundLedger& ledger, const BinningScheme& binning, const TimeLens& lens);

}  // namespace tfqkd
