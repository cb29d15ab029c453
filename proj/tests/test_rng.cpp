#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qwind/rng.hpp"
#include "qwind/stats.hpp"

using namespace qwind;

TEST_CASE("philox4x32-10 known-answer vectors")
{
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct")
{
    RngStream a(42, 7, Substream::radial), b(42, 7, Substream::radial);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u32() == b.next_u32());

    std::set<std::uint32_t> firsts;
    for (std::uint64_t path = 0; path < 100; ++path)
        for (auto sub : {Substream::radial, Substream::ambient, Substream::winding, Substream::endpoint}) {
            RngStream s(42, path, sub);
            firsts.insert(s.next_u32());
        }
    CHECK(firsts.size() == 400);

    RngStream c(43, 7, Substream::radial);
    RngStream d(42, 7, Substream::radial);
    int equal = 0;
    for (int i = 0; i < 100; ++i)
        equal += c.next_u32() == d.next_u32();
    CHECK(equal < 3);

    // paths beyond 2^32 use the high counter word
    RngStream e(1, 1ULL << 33, Substream::radial), f(1, 0, Substream::radial);
    CHECK(e.next_u32() != f.next_u32());
}

TEST_CASE("distribution moments")
{
    const int n = 200000;
    RngStream rng(9, 0, Substream::test);
    std::vector<double> u(n), z(n), z2(n), g(n);
    double umin = 1.0, umax = 0.0;
    for (int i = 0; i < n; ++i) {
        u[i] = rng.uniform();
        umin = std::min(umin, u[i]);
        umax = std::max(umax, u[i]);
    }
    CHECK(umin > 0.0);
    CHECK(umax < 1.0);
    CHECK(std::abs(mean_and_stderr(u).mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    for (int i = 0; i < n; ++i) {
        z[i] = rng.normal();
        z2[i] = z[i] * z[i];
    }
    CHECK(std::abs(mean_and_stderr(z).mean) < 4.0 / std::sqrt(n));
    CHECK(std::abs(mean_and_stderr(z2).mean - 1.0) < 4.0 * std::sqrt(2.0 / n));
    for (double shape : {0.3, 1.5, 7.0}) {
        for (int i = 0; i < n; ++i)
            g[i] = rng.gamma(shape);
        const auto m = mean_and_stderr(g);
        CHECK(std::abs(m.mean - shape) < 4.0 * std::sqrt(shape / n));
    }
}

TEST_CASE("kolmogorov-smirnov")
{
    std::vector<double> a(10000), b(10000), c(10000);
    RngStream rng(5, 0, Substream::test);
    for (auto& x : a)
        x = rng.normal();
    for (auto& x : b)
        x = rng.normal() + 3.0;
    for (auto& x : c)
        x = rng.normal();
    auto same = ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.pass);
    CHECK_FALSE(ks_two_sample(a, b).pass);
    CHECK(ks_critical_1pct(10000, 10000) == doctest::Approx(1.62762 * std::sqrt(2.0 / 10000)).epsilon(1e-5));

    // calibration: the 1% test rejects rarely for equal laws
    int rejects = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        RngStream r(100 + s, 0, Substream::test);
        std::vector<double> x(2000), y(2000);
        for (auto& v : x)
            v = r.normal();
        for (auto& v : y)
            v = r.normal();
        rejects += !ks_two_sample(x, y).pass;
    }
    CHECK(rejects <= 5);
}

TEST_CASE("mean and standard error")
{
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const auto m = mean_and_stderr(xs);
    CHECK(m.mean == 2.5);
    CHECK(m.stderr == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(compensated_sum(std::vector<double>{1e16, 1.0, -1e16}) == 1.0);
    CHECK_THROWS(mean_and_stderr(std::vector<double>{}));
}
