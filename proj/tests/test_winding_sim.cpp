#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qwind/errors.hpp"
#include "qwind/estimators.hpp"
#include "qwind/laws.hpp"
#include "qwind/stats.hpp"
#include "qwind/winding_sim.hpp"

using namespace qwind;

namespace {

std::vector<double> component(const std::vector<WindingSample>& s, int k)
{
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        out[i] = s[i].zeta[k];
    return out;
}

const Geometry kGeometries[] = {
    Geometry(GeometryKind::flat_H, 1.0),
    Geometry(GeometryKind::projective_HP1, std::numbers::pi / 4),
    Geometry(GeometryKind::hyperbolic_HH1, 1.0),
};

// Nine comparisons per run: 1.25 times the 1% critical value is roughly the
// 0.05% level, keeping the family-wise rate near 0.5%.
bool ks_agrees(const std::vector<double>& a, const std::vector<double>& b)
{
    const auto r = ks_two_sample(a, b);
    return r.statistic <= 1.25 * r.critical;
}

}  // namespace

TEST_CASE("geometry")
{
    CHECK(parse_geometry("flat") == GeometryKind::flat_H);
    CHECK(parse_geometry("hp1") == GeometryKind::projective_HP1);
    CHECK(parse_geometry("hyperbolic_HH1") == GeometryKind::hyperbolic_HH1);
    CHECK_THROWS_AS(parse_geometry("sphere"), DomainError);
    CHECK_THROWS_AS(Geometry(GeometryKind::projective_HP1, 1.6), DomainError);
    CHECK_THROWS_AS(Geometry(GeometryKind::flat_H, 0.0), DomainError);
    CHECK(Geometry(GeometryKind::hyperbolic_HH1, 1.0).ambient_start().t == doctest::Approx(std::tanh(1.0)));
}

TEST_CASE("time-change route")
{
    SimOptions opts;
    opts.master_seed = 21;
    SUBCASE("zero frequency")
    {
        const auto s = simulate_timechange(kGeometries[0], 1.0, 500, opts);
        const auto e = empirical_cf(s, {});
        CHECK(e.value.real() == 1.0);
        CHECK(e.stderr == 0.0);
        for (const auto& x : s) {
            REQUIRE(x.clock);
            CHECK(*x.clock >= 0.0);
            CHECK(x.horizon == 1.0);
        }
    }
    SUBCASE("flat Rao-Blackwell estimate matches the quadrature formula")
    {
        const auto s = simulate_timechange(kGeometries[0], 1.0, 20000, opts);
        for (double l : {0.5, 1.0, 2.0}) {
            const WindingVector lambda{0.0, l, 0.0};
            const auto mc = rao_blackwell_cf(s, lambda);
            const auto ref = cf_flat_exact(lambda, 1.0, 1.0);
            CHECK(std::abs(mc.value.real() - ref.value.real()) < 3.0 * mc.stderr);
        }
    }
    SUBCASE("isotropy and symmetry")
    {
        for (const auto& g : kGeometries) {
            ++opts.master_seed;
            const auto s = simulate_timechange(g, 1.0, 10000, opts);
            std::vector<double> dir2(s.size());
            for (int k = 0; k < 3; ++k) {
                const auto c = component(s, k);
                const auto m = mean_and_stderr(c);
                CHECK(std::abs(m.mean) < 3.5 * m.stderr);
                for (std::size_t i = 0; i < s.size(); ++i)
                    dir2[i] = s[i].zeta[k] * s[i].zeta[k] / s[i].zeta.norm2();
                CHECK(std::abs(mean_and_stderr(dir2).mean - 1.0 / 3.0) < 3.5 * mean_and_stderr(dir2).stderr);
            }
            // components of one sample share the clock; compare disjoint halves
            const std::size_t half = s.size() / 2;
            const std::vector<WindingSample> first(s.begin(), s.begin() + half), second(s.begin() + half, s.end());
            CHECK(ks_agrees(component(first, 0), component(second, 1)));
            CHECK(ks_agrees(component(first, 1), component(second, 2)));
            CHECK(ks_agrees(component(first, 2), component(second, 0)));
        }
    }
    SUBCASE("deterministic across worker counts")
    {
        SimOptions many = opts;
        many.workers = 4;
        const auto a = simulate_timechange(kGeometries[1], 0.5, 300, opts);
        const auto b = simulate_timechange(kGeometries[1], 0.5, 300, many);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].zeta == b[i].zeta);
            CHECK(*a[i].clock == *b[i].clock);
        }
    }
}

TEST_CASE("direct route")
{
    SimOptions opts;
    opts.master_seed = 22;
    SUBCASE("flat: agrees with the time-change route")
    {
        const WindingVector lambda{1.0, 0.0, 0.0};
        const auto d = simulate_direct(kGeometries[0], 1.0, 1e-3, 10000, opts);
        const auto tc = simulate_timechange(kGeometries[0], 1.0, 10000, opts);
        const auto a = empirical_cf(d, lambda);
        const auto b = empirical_cf(tc, lambda);
        CHECK(std::abs(a.value.real() - b.value.real()) < 3.0 * std::hypot(a.stderr, b.stderr));
        for (const auto& x : d)
            CHECK_FALSE(x.clock);
    }
    SUBCASE("hh1 at t = 2: agrees with the time-change route")
    {
        const WindingVector lambda{1.0, 0.0, 0.0};
        const Geometry g(GeometryKind::hyperbolic_HH1, 1.0);
        const auto d = simulate_direct(g, 2.0, 2e-3, 4000, opts);
        const auto tc = simulate_timechange(g, 2.0, 4000, opts);
        const auto a = empirical_cf(d, lambda);
        const auto b = rao_blackwell_cf(tc, lambda);
        CHECK(std::abs(a.value.real() - b.value.real()) < 3.0 * std::hypot(a.stderr, b.stderr));
    }
    SUBCASE("left multiplication of start and increments leaves every sample unchanged")
    {
        const Quaternion u = [] {
            const Quaternion q{0.3, -0.8, 0.4, 0.2};
            return (1.0 / q.norm()) * q;
        }();
        for (const auto& g : kGeometries) {
            const auto a = simulate_direct(g, 0.5, 1e-3, 50, opts);
            const auto b = simulate_direct(g, 0.5, 1e-3, 50, opts, u);
            for (std::size_t i = 0; i < a.size(); ++i)
                CHECK((a[i].zeta - b[i].zeta).norm() < 1e-9 * (1.0 + a[i].zeta.norm()));
        }
    }
    SUBCASE("mean zero")
    {
        for (const auto& g : kGeometries) {
            const auto d = simulate_direct(g, 1.0, 2e-3, 3000, opts);
            for (int k = 0; k < 3; ++k) {
                const auto m = mean_and_stderr(component(d, k));
                CHECK(std::abs(m.mean) < 3.5 * m.stderr);
            }
        }
    }
    SUBCASE("argument errors")
    {
        CHECK_THROWS_AS(simulate_direct(kGeometries[0], 0.0, 1e-3, 10, opts), DomainError);
        CHECK_THROWS_AS(simulate_direct(kGeometries[2], 1.0, -1.0, 10, opts), DomainError);
        CHECK_THROWS_AS(simulate_timechange(kGeometries[2], -1.0, 10, opts), DomainError);
    }
}
