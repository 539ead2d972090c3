// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "tfqkd/error.hpp"
#include "tfqkd/rng.hpp"

namespace tfqkd {

void SimulationConfig::validate() const
{
    require(rounds >= 1, ErrorCode::InvalidArgument, "need at least one round");
    require(basis_prob > 0.0 && basis_prob < 1.0, ErrorCode::InvalidArgument, "basis_prob must lie in (0, 1)");
    require(threads >= 1, ErrorCode::InvalidArgument, "need at least one thread");
}

RoundLedger::RoundLedger(int m_) : m(m_)
{
    for (auto& c : joint_counts) c = CountMatrix::Zero(m_, m_);
}

RoundLedger& RoundLedger::merge(const RoundLedger& other)
{
    require(m == other.m, ErrorCode::InvalidArgument, "cannot merge ledgers with different alphabet sizes");
    rounds += other.rounds;
    no_click += other.no_click;
    multi_click_discarded += other.multi_click_discarded;
    basis_mismatch += other.basis_mismatch;
    sifted += other.sifted;
    basis_matched_rounds += other.basis_matched_rounds;
    correct += other.correct;
    incorrect += other.incorrect;
    for (int b = 0; b < 2; ++b) {
        sifted_by_basis[b] += other.sifted_by_basis[b];
        joint_counts[b] += other.joint_counts[b];
    }
    return *this;
}

bool RoundLedger::operator==(const RoundLedger& o) const
{
    return m == o.m && rounds == o.rounds && no_click == o.no_click &&
           multi_click_discarded == o.multi_click_discarded && basis_mismatch == o.basis_mismatch &&
           sifted == o.sifted && basis_matched_rounds == o.basis_matched_rounds && correct == o.correct &&
           incorrect == o.incorrect && sifted_by_basis == o.sifted_by_basis &&
           joint_counts[0] == o.joint_counts[0] && joint_counts[1] == o.joint_counts[1];
}

namespace {

// Inverse-CDF sampler over a finite table.
class DiscreteSampler {
public:
    DiscreteSampler() = default;
    explicit DiscreteSampler(std::vector<double> weights) : cdf_(std::move(weights))
    {
        std::partial_sum(cdf_.begin(), cdf_.end(), cdf_.begin());
        const double total = cdf_.back();
        for (double& c : cdf_) c /= total;
    }

    std::size_t operator()(double u) const
    {
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    }

private:
    std::vector<double> cdf_;
};

DiscreteSampler binomial_sampler(int n, double p)
{
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
    } else if (p >= 1.0) {
        pmf[n] = 1.0;
    } else {
        // Log space keeps (1-p)^n representable for large n.
        const double lq = std::log1p(-p);
        const double lp = std::log(p);
        for (int k = 0; k <= n; ++k)
            pmf[k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lp +
                              (n - k) * lq);
    }
    return DiscreteSampler(std::move(pmf));
}

struct SourceTables {
    std::array<DiscreteSampler, 2> joint;  // flattened (b, a), column-major: index = a*M + b
    std::array<DiscreteSampler, 2> alice;
    std::array<DiscreteSampler, 2> bob;
};

SourceTables make_tables(const JointSpectralAmplitude& jsa, const BinningScheme& binning)
{
    const TimeLens lens = design_time_lens(binning);
    SourceTables t;
    for (Basis basis : {Basis::Frequency, Basis::Time}) {
        const auto dist = joint_outcome_distribution(jsa, binning, lens, basis);
        const auto& p = dist.probabilities();
        const int i = static_cast<int>(basis);
        t.joint[i] = DiscreteSampler(std::vector<double>(p.data(), p.data() + p.size()));
        const Eigen::VectorXd pa = dist.alice_marginal();
        const Eigen::VectorXd pb = dist.bob_marginal();
        t.alice[i] = DiscreteSampler(std::vector<double>(pa.data(), pa.data() + pa.size()));
        t.bob[i] = DiscreteSampler(std::vector<double>(pb.data(), pb.data() + pb.size()));
    }
    return t;
}

struct RoundContext {
    int m;
    double epsilon;
    double eta;
    double basis_prob;
    MultiClickPolicy policy;
    CorrelationModel model;
    DiscreteSampler dark_count;
    const SourceTables* tables;
};

// Appends k distinct detector indices drawn uniformly from [0, m).
void draw_dark_positions(CounterRng& rng, int m, std::size_t k, std::vector<int>& out, std::vector<int>& scratch)
{
    if (2 * k <= static_cast<std::size_t>(m)) {
        const std::size_t start = out.size();
        while (out.size() - start < k) {
            const int idx = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
            if (std::find(out.begin() + static_cast<std::ptrdiff_t>(start), out.end(), idx) == out.end())
                out.push_back(idx);
        }
        return;
    }
    scratch.resize(static_cast<std::size_t>(m));
    std::iota(scratch.begin(), scratch.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + rng.below(static_cast<std::uint64_t>(m) - i);
        std::swap(scratch[i], scratch[j]);
        out.push_back(scratch[i]);
    }
}

// Clicks on one side: the photon's channel (or -1) plus dark counts; a dark
// count on the channel the photon already fired is absorbed.
std::vector<int>& side_clicks(CounterRng& rng, const RoundContext& ctx, int photon, std::vector<int>& clicks,
                              std::vector<int>& scratch)
{
    clicks.clear();
    const std::size_t k = ctx.dark_count(rng.uniform());
    if (k > 0) draw_dark_positions(rng, ctx.m, k, clicks, scratch);
    if (photon >= 0 && std::find(clicks.begin(), clicks.end(), photon) == clicks.end()) clicks.push_back(photon);
    return clicks;
}

void run_round(CounterRng& rng, const RoundContext& ctx, RoundLedger& ledger, std::vector<int>& alice_clicks,
               std::vector<int>& bob_clicks, std::vector<int>& scratch)
{
    ++ledger.rounds;
    const bool emitted = rng.uniform() < ctx.epsilon;
    const Basis alice_basis = rng.uniform() < ctx.basis_prob ? Basis::Frequency : Basis::Time;
    const Basis bob_basis = rng.uniform() < ctx.basis_prob ? Basis::Frequency : Basis::Time;
    const bool matched = alice_basis == bob_basis;
    if (matched) ++ledger.basis_matched_rounds;

    int alice_photon = -1;
    int bob_photon = -1;
    if (emitted) {
        int a = 0;
        int b = 0;
        if (ctx.model == CorrelationModel::IdealDelta) {
            a = b = static_cast<int>(rng.below(static_cast<std::uint64_t>(ctx.m)));
        } else if (matched) {
            const auto idx = ctx.tables->joint[static_cast<int>(alice_basis)](rng.uniform());
            a = static_cast<int>(idx) / ctx.m;
            b = static_cast<int>(idx) % ctx.m;
        } else {
            a = static_cast<int>(ctx.tables->alice[static_cast<int>(alice_basis)](rng.uniform()));
            b = static_cast<int>(ctx.tables->bob[static_cast<int>(bob_basis)](rng.uniform()));
        }
        if (rng.uniform() < ctx.eta) alice_photon = a;
        if (rng.uniform() < ctx.eta) bob_photon = b;
    }

    const auto& ac = side_clicks(rng, ctx, alice_photon, alice_clicks, scratch);
    const auto& bc = side_clicks(rng, ctx, bob_photon, bob_clicks, scratch);
    if (ac.empty() || bc.empty()) {
        ++ledger.no_click;
        return;
    }
    if (ctx.policy == MultiClickPolicy::Discard && (ac.size() > 1 || bc.size() > 1)) {
        ++ledger.multi_click_discarded;
        return;
    }
    const int a_out = ac.size() == 1 ? ac[0] : ac[rng.below(ac.size())];
    const int b_out = bc.size() == 1 ? bc[0] : bc[rng.below(bc.size())];
    if (!matched) {
        ++ledger.basis_mismatch;
        return;
    }
    const int bi = static_cast<int>(alice_basis);
    ++ledger.sifted;
    ++ledger.sifted_by_basis[bi];
    ++ledger.joint_counts[bi](b_out, a_out);
    if (a_out == b_out)
        ++ledger.correct;
    else
        ++ledger.incorrect;
}

RoundLedger run_range(const RoundContext& ctx, std::uint64_t seed, std::uint64_t first, std::uint64_t last)
{
    RoundLedger ledger(ctx.m);
    std::vector<int> alice_clicks, bob_clicks, scratch;
    alice_clicks.reserve(8);
    bob_clicks.reserve(8);
    for (std::uint64_t r = first; r < last; ++r) {
        CounterRng rng(seed, r);
        run_round(rng, ctx, ledger, alice_clicks, bob_clicks, scratch);
    }
    return ledger;
}

}  // namespace

RoundLedger simulate_rounds(const SimulationConfig& config, const ChannelModel& channel,
                            const BinningScheme& binning, const JointSpectralAmplitude* jsa)
{
    config.validate();
    channel.validate();
    require(channel.m == binning.m(), ErrorCode::InvalidArgument, "channel and binning disagree on M");

    std::optional<SourceTables> tables;
    if (config.correlation_model == CorrelationModel::SampledJsa) {
        require(jsa != nullptr, ErrorCode::InvalidArgument, "sampled-jsa correlations need a source amplitude");
        tables = make_tables(*jsa, binning);
    }
    const RoundContext ctx{binning.m(),
                           channel.epsilon,
                           transmission(channel),
                           config.basis_prob,
                           config.multi_click_policy,
                           config.correlation_model,
                           binomial_sampler(binning.m(), channel.dark),
                           tables ? &*tables : nullptr};

    const std::uint64_t shards = std::min<std::uint64_t>(config.threads, config.rounds);
    std::vector<RoundLedger> parts(shards, RoundLedger(binning.m()));
    auto bounds = [&](std::uint64_t s) { return config.rounds / shards * s + std::min(s, config.rounds % shards); };
    if (shards == 1) {
        parts[0] = run_range(ctx, config.seed, 0, config.rounds);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(shards);
        for (std::uint64_t s = 0; s < shards; ++s)
            workers.emplace_back([&, s] { parts[s] = run_range(ctx, config.seed, bounds(s), bounds(s + 1)); });
        for (auto& w : workers) w.join();
    }
    RoundLedger total(binning.m());
    for (const auto& p : parts) total.merge(p);
    return total;
}

EmpiricalDistribution empirical_distribution(const RoundLedger& ledger, Basis basis)
{
    const std::uint64_t n = ledger.sifted_by_basis[static_cast<int>(basis)];
    if (n == 0) fail(ErrorCode::EmptyBasis, std::string("no sifted events in the ") + to_string(basis) + " basis");
    const Eigen::MatrixXd p = ledger.counts(basis).cast<double>() / static_cast<double>(n);
    const Eigen::MatrixXd se = (p.array() * (1.0 - p.array()) / static_cast<double>(n)).sqrt().matrix();
    return {OutcomeDistribution(basis, p), se, n};
}

namespace {
Estimate proportion(std::uint64_t hits, std::uint64_t n)
{
    if (n == 0) return {0.0, 0.0, 0};
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}
}  // namespace

Estimate empirical_error_probability(const RoundLedger& ledger) { return proportion(ledger.incorrect, ledger.sifted); }
Estimate empirical_p_correct(const RoundLedger& ledger) { return proportion(ledger.correct, ledger.basis_matched_rounds); }
Estimate empirical_p_incorrect(const RoundLedger& ledger)
{
    return proportion(ledger.incorrect, ledger.basis_matched_rounds);
}

KeyRateBound estimate_key_rate(const RoundLedger& ledger, const BinningScheme& binning, const TimeLens& lens)
{
    const auto freq = empirical_distribution(ledger, Basis::Frequency);
    const auto time = empirical_distribution(ledger, Basis::Time);
    const double b = entropic_bound(binning.delta_omega(), lens.delta_t(binning.delta_omega()));
    return secret_key_bound(entropy_report(freq.distribution), entropy_report(time.distribution), b);
}

}  // namespace tfqkd
