#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "tfqkd/rng.hpp"

using tfqkd::CounterRng;

TEST_CASE("streams are reproducible and distinct")
{
    CounterRng a(5, 11), b(5, 11), c(5, 12), d(6, 11);
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
        CHECK(x != d());
    }
}

TEST_CASE("known first output")
{
    // SplitMix64 finalizer on a known input.
    static_assert(tfqkd::mix64(0) == 0);
    CHECK(tfqkd::mix64(1) == 0x5692161D100B05E5ULL);
}

TEST_CASE("uniform moments")
{
    CounterRng rng(1, 0);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0 / 3).epsilon(0.01));
}

TEST_CASE("below is uniform")
{
    CounterRng rng(3, 0);
    std::array<int, 10> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto k = rng.below(10);
        REQUIRE(k < 10);
        ++counts[k];
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
    // 9 degrees of freedom, p = 0.001 critical value.
    CHECK(chi2 < 27.88);
}

TEST_CASE("first draws of neighbouring streams are uncorrelated")
{
    const int n = 100000;
    double sxy = 0, sx = 0, sy = 0;
    for (int s = 0; s < n; ++s) {
        const double x = CounterRng(1, s).uniform();
        const double y = CounterRng(1, s + 1).uniform();
        sxy += x * y;
        sx += x;
        sy += y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    CHECK(std::abs(cov) < 5 * (1.0 / 12) / std::sqrt(n));
}
