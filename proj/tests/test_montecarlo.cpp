#include <doctest.h>

#include <cmath>

#include "tfqkd/error.hpp"
#include "tfqkd/montecarlo.hpp"

using namespace tfqkd;

namespace {

void check_conservation(const RoundLedger& l)
{
    CHECK(l.no_click + l.multi_click_discarded + l.basis_mismatch + l.sifted == l.rounds);
    CHECK(l.correct + l.incorrect == l.sifted);
    CHECK(l.sifted_by_basis[0] + l.sifted_by_basis[1] == l.sifted);
    CHECK(l.counts(Basis::Frequency).sum() == l.sifted_by_basis[0]);
    CHECK(l.counts(Basis::Time).sum() == l.sifted_by_basis[1]);
}

bool within(double observed, double expected, std::uint64_t n, double sigmas = 3.0)
{
    const double sigma = std::sqrt(expected * (1 - expected) / static_cast<double>(n));
    return std::abs(observed - expected) <= sigmas * sigma;
}

ChannelModel noisy(int m)
{
    ChannelModel c;
    c.m = m;
    c.epsilon = 0.5;
    c.eta_d = 0.8;
    c.length = 0.0;
    c.dark = 0.02;
    return c;
}

}  // namespace

TEST_CASE("configuration validation")
{
    SimulationConfig s;
    s.rounds = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s.rounds = 1;
    s.basis_prob = 1.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s.basis_prob = 0.5;
    s.threads = 0;
    CHECK_THROWS_AS(s.validate(), Error);

    SimulationConfig ok;
    ok.rounds = 10;
    const BinningScheme b(8, 0.75, 0.2);
    ChannelModel c;
    CHECK_THROWS_AS(simulate_rounds(ok, c, b), Error);  // M mismatch
    ok.correlation_model = CorrelationModel::SampledJsa;
    c.m = 8;
    CHECK_THROWS_AS(simulate_rounds(ok, c, b), Error);  // no source
}

TEST_CASE("every round is classified once")
{
    SimulationConfig s;
    s.rounds = 200000;
    const auto l = simulate_rounds(s, noisy(4), BinningScheme(4, 0.75, 0.2));
    check_conservation(l);
    CHECK(l.multi_click_discarded > 0);
    CHECK(l.incorrect > 0);
}

TEST_CASE("results do not depend on the thread count")
{
    SimulationConfig s;
    s.rounds = 100003;
    s.seed = 77;
    const BinningScheme b(8, 0.75, 0.2);
    auto c = noisy(8);
    const auto one = simulate_rounds(s, c, b);
    for (unsigned t : {2u, 3u, 8u}) {
        s.threads = t;
        CHECK(simulate_rounds(s, c, b) == one);
    }
    s.seed = 78;
    CHECK_FALSE(simulate_rounds(s, c, b) == one);
}

TEST_CASE("ledger merge is a monoid")
{
    SimulationConfig s;
    s.rounds = 5000;
    const BinningScheme b(4, 0.75, 0.2);
    auto l1 = simulate_rounds(s, noisy(4), b);
    s.seed = 2;
    const auto l2 = simulate_rounds(s, noisy(4), b);
    RoundLedger sum(4);
    sum.merge(l1).merge(l2);
    CHECK(sum.rounds == 10000);
    check_conservation(sum);
    RoundLedger other(4);
    other.merge(l2).merge(l1);
    CHECK(sum == other);
    CHECK_THROWS_AS(sum.merge(RoundLedger(8)), Error);
}

TEST_CASE("click statistics match the closed-form probabilities")
{
    for (int m : {4, 16}) {
        CAPTURE(m);
        SimulationConfig s;
        s.rounds = 2'000'000;
        s.threads = 4;
        const auto c = noisy(m);
        const auto l = simulate_rounds(s, c, BinningScheme(m, 0.75, 0.2));
        const auto closed = pcorrect_pincorrect(c);
        const auto pc = empirical_p_correct(l);
        const auto pi = empirical_p_incorrect(l);
        CHECK(within(pc.value, closed.p_correct, pc.samples));
        CHECK(within(pi.value, closed.p_incorrect, pi.samples));
        const double p = closed.error_probability();
        const auto pe = empirical_error_probability(l);
        CHECK(within(pe.value, p, pe.samples));
        CHECK(static_cast<double>(l.basis_matched_rounds) / l.rounds == doctest::Approx(0.5).epsilon(0.01));
    }
}

TEST_CASE("sifted joint counts follow the uniform error model entrywise")
{
    const int m = 4;
    SimulationConfig s;
    s.rounds = 1'000'000;
    const auto c = noisy(m);
    const auto l = simulate_rounds(s, c, BinningScheme(m, 0.75, 0.2));
    const double p = pcorrect_pincorrect(c).error_probability();
    for (Basis basis : {Basis::Frequency, Basis::Time}) {
        const auto emp = empirical_distribution(l, basis);
        for (int b = 0; b < m; ++b)
            for (int a = 0; a < m; ++a) {
                const double expected = a == b ? (1 - p) / m : p / (m * (m - 1.0));
                CHECK(within(emp.distribution(b, a), expected, emp.samples, 4.0));
            }
    }
}

TEST_CASE("noiseless channel")
{
    ChannelModel c;
    c.m = 8;
    c.epsilon = 1;
    c.eta_d = 1;
    c.length = 0;
    c.dark = 0;
    SimulationConfig s;
    s.rounds = 20000;
    const BinningScheme b(8, 0.75, 0.2);
    const auto l = simulate_rounds(s, c, b);
    CHECK(l.no_click == 0);
    CHECK(l.multi_click_discarded == 0);
    CHECK(l.incorrect == 0);
    CHECK(l.sifted + l.basis_mismatch == l.rounds);
    const auto key = estimate_key_rate(l, b, design_time_lens(b));
    CHECK(key.mutual_info == doctest::Approx(3.0).epsilon(0.01));
    CHECK(key.secret_key == doctest::Approx(3.0 - 0.0854695).epsilon(0.01));
}

TEST_CASE("random-assign keeps multi-click rounds")
{
    SimulationConfig s;
    s.rounds = 100000;
    s.multi_click_policy = MultiClickPolicy::RandomAssign;
    const auto l = simulate_rounds(s, noisy(4), BinningScheme(4, 0.75, 0.2));
    CHECK(l.multi_click_discarded == 0);
    check_conservation(l);
}

TEST_CASE("sampled source correlations")
{
    const int m = 4;
    const auto [binning, jsa] = design_binning(m, 0.75, 0.2);
    ChannelModel c;
    c.m = m;
    c.epsilon = 1;
    c.eta_d = 1;
    c.length = 0;
    c.dark = 0;
    SimulationConfig s;
    s.rounds = 400000;
    s.correlation_model = CorrelationModel::SampledJsa;
    const auto l = simulate_rounds(s, c, binning, &jsa);
    const auto lens = design_time_lens(binning);
    for (Basis basis : {Basis::Frequency, Basis::Time}) {
        const auto ref = joint_outcome_distribution(jsa, binning, lens, basis);
        const auto emp = empirical_distribution(l, basis);
        for (int b = 0; b < m; ++b)
            for (int a = 0; a < m; ++a) CHECK(within(emp.distribution(b, a), ref(b, a), emp.samples, 4.0));
    }
}

TEST_CASE("empty basis")
{
    SimulationConfig s;
    s.rounds = 10;
    ChannelModel c;
    c.m = 4;
    c.dark = 0;
    c.epsilon = 0;
    const auto l = simulate_rounds(s, c, BinningScheme(4, 0.75, 0.2));
    CHECK(l.no_click == 10);
    CHECK_THROWS_AS(empirical_distribution(l, Basis::Time), Error);
    CHECK(empirical_error_probability(l).samples == 0);
}
