#include <doctest.h>

#include <bit>
#include <cmath>

#include "tfqkd/error.hpp"
#include "tfqkd/noise.hpp"

using namespace tfqkd;

namespace {

struct Exact {
    double correct = 0;
    double incorrect = 0;
};

// Enumerates every emission, survival and dark-count pattern of one
// basis-matched round and keeps rounds with exactly one click per side.
Exact enumerate(const ChannelModel& c)
{
    const int m = c.m;
    const double eta = c.eta_d * std::exp(-c.length / c.l_att);
    Exact out;
    for (int emitted = 0; emitted <= 1; ++emitted)
        for (int sa = 0; sa <= emitted; ++sa)
            for (int sb = 0; sb <= emitted; ++sb) {
                double base = emitted ? c.epsilon : 1 - c.epsilon;
                if (emitted) base *= (sa ? eta : 1 - eta) * (sb ? eta : 1 - eta);
                for (unsigned pattern = 0; pattern < (1u << (2 * m)); ++pattern) {
                    double prob = base;
                    unsigned alice = pattern & ((1u << m) - 1);
                    unsigned bob = pattern >> m;
                    for (int k = 0; k < 2 * m; ++k) prob *= (pattern >> k) & 1u ? c.dark : 1 - c.dark;
                    // The pair always lands in channel 0 on both sides.
                    if (sa) alice |= 1u;
                    if (sb) bob |= 1u;
                    if (std::popcount(alice) != 1 || std::popcount(bob) != 1) continue;
                    (alice == bob ? out.correct : out.incorrect) += prob;
                }
            }
    return out;
}

}  // namespace

TEST_CASE("transmission")
{
    ChannelModel c;
    CHECK(transmission(c) == doctest::Approx(0.25 * std::exp(-1.0)));
    c.length = 0;
    CHECK(transmission(c) == doctest::Approx(0.25));
    c.length = 2;
    c.l_att = 0;
    CHECK(transmission(c) == 0.0);
    c.eta_d = 1.5;
    CHECK_THROWS_AS(transmission(c), Error);
}

TEST_CASE("error probability closed form")
{
    ChannelModel c;
    const double eta = 0.25 * std::exp(-1.0);
    const double d = 1e-6;
    const double kappa = 2 * d * (1 - eta) / eta + 16 * d * d * (1 + 0.9 / (0.1 * eta * eta));
    const auto e = error_probability(c);
    CHECK_FALSE(e.degenerate);
    CHECK(e.p == doctest::Approx(kappa * 15 / (16 * kappa + 1)));
    CHECK(e.p == doctest::Approx(2.96e-4).epsilon(0.01));
}

TEST_CASE("error probability grows with distance and stays admissible")
{
    for (int m : {2, 16, 4096}) {
        ChannelModel c;
        c.m = m;
        double last = -1;
        for (double len = 0; len <= 8; len += 0.25) {
            c.length = len;
            const double p = error_probability(c).p;
            CHECK(p > last);
            CHECK(p < (m - 1.0) / m);
            last = p;
        }
    }
}

TEST_CASE("degenerate channels")
{
    ChannelModel c;
    c.l_att = 0;
    const auto e = error_probability(c);
    CHECK(e.degenerate);
    CHECK(e.p == doctest::Approx(15.0 / 16));
    c.dark = 0;
    CHECK(error_probability(c).p == 0.0);
    ChannelModel silent;
    silent.epsilon = 0;
    CHECK(error_probability(silent).degenerate);
}

TEST_CASE("click probabilities agree with exhaustive enumeration")
{
    for (int m : {2, 3, 4})
        for (double dark : {1e-6, 0.01, 0.2})
            for (double len : {0.0, 1.0, 3.0}) {
                ChannelModel c;
                c.m = m;
                c.dark = dark;
                c.length = len;
                c.epsilon = 0.3;
                c.eta_d = 0.6;
                CAPTURE(m);
                CAPTURE(dark);
                CAPTURE(len);
                const auto exact = enumerate(c);
                const auto closed = pcorrect_pincorrect(c);
                CHECK(closed.p_correct == doctest::Approx(exact.correct).epsilon(1e-12));
                CHECK(closed.p_incorrect == doctest::Approx(exact.incorrect).epsilon(1e-12));
            }
}

TEST_CASE("the closed-form error probability tracks the click ratio")
{
    for (int m : {16, 256, 2048}) {
        ChannelModel c;
        c.m = m;
        const auto clicks = pcorrect_pincorrect(c);
        CHECK(error_probability(c).p == doctest::Approx(clicks.error_probability()).epsilon(0.02));
    }
}

TEST_CASE("uniform error model")
{
    const auto d = error_model_distribution(4, 0.3);
    CHECK(d.probabilities().trace() == doctest::Approx(0.7));
    CHECK(d(1, 0) == doctest::Approx(0.1 / 4));
    CHECK(d.probabilities().sum() == doctest::Approx(1.0));
    CHECK(error_model_distribution(4, 0.75)(0, 1) == doctest::Approx(1.0 / 16));
    CHECK_THROWS_AS(error_model_distribution(4, 0.8), Error);
    CHECK_THROWS_AS(error_model_distribution(4, -0.1), Error);
    CHECK_THROWS_AS(error_model_distribution(1, 0.0), Error);
}

TEST_CASE("closed-form error model entropies")
{
    for (int m : {2, 5, 16, 64})
        for (double p : {0.0, 1e-5, 0.01, 0.3, (m - 1.0) / m}) {
            const auto full = entropy_report(error_model_distribution(m, p, Basis::Time));
            const auto fast = error_model_entropies(m, p, Basis::Time);
            CHECK(fast.h_b == doctest::Approx(full.h_b).epsilon(1e-12));
            CHECK(fast.h_b_given_a == doctest::Approx(full.h_b_given_a).epsilon(1e-10));
        }
    CHECK_THROWS_AS(error_model_entropies(4, 0.9), Error);
    CHECK(error_model_entropies(1 << 20, 1e-3).h_b == doctest::Approx(20.0));
}
