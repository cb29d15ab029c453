#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "qwind/errors.hpp"
#include "qwind/estimators.hpp"
#include "qwind/laws.hpp"
#include "qwind/specfun.hpp"
#include "qwind/stats.hpp"
#include "qwind/winding_sim.hpp"

using namespace qwind;

namespace {

constexpr double kPi = std::numbers::pi;

double rk4_cosh2(double alpha, double beta, double r0, double t, int steps)
{
    const double k = 2.0 * (1.0 + alpha + beta);
    const double c = 1.0 + 2.0 * beta;
    auto f = [&](double phi) { return k * phi - c; };
    double phi = std::pow(std::cosh(r0), 2);
    const double h = t / steps;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(phi), k2 = f(phi + 0.5 * h * k1), k3 = f(phi + 0.5 * h * k2), k4 = f(phi + h * k3);
        phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return phi;
}

}  // namespace

TEST_CASE("girsanov tilt")
{
    CHECK(girsanov_tilt({}) == 0.0);
    CHECK(girsanov_tilt({std::sqrt(3.0), 0, 0}) == doctest::Approx(1.0));
    CHECK(girsanov_tilt({1e-9, 0, 0}) == doctest::Approx(5e-19));
}

TEST_CASE("cf_flat_exact")
{
    for (auto [t, rho] : {std::pair{1.0, 1.0}, std::pair{0.1, 3.0}, std::pair{10.0, 0.5}, std::pair{1e4, 1.0},
                          std::pair{1e8, 1.0}})
        CHECK(cf_flat_exact({}, t, rho).value.real() == doctest::Approx(1.0).epsilon(1e-8));

    double prev = 1.0;
    for (double l = 0.25; l <= 4.0; l += 0.25) {
        const double v = cf_flat_exact({l, 0, 0}, 1.0, 1.0).value.real();
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
    // depends on lambda only through its norm
    CHECK(cf_flat_exact({0.6, 0.8, 0.0}, 2.0, 1.0).value.real() ==
          doctest::Approx(cf_flat_exact({0.0, 0.0, 1.0}, 2.0, 1.0).value.real()).epsilon(1e-12));

    SUBCASE("long-time scaling")
    {
        // With the scaling sqrt(2/log t) the law approaches N(0, I): discrepancy shrinks monotonically.
        double last = 1.0;
        for (double t : {1e4, 1e6, 1e8}) {
            const double f = std::sqrt(2.0 / std::log(t));
            const double d = std::abs(cf_flat_exact({f, 0, 0}, t, 1.0).value.real() - std::exp(-0.5));
            CHECK(d < last);
            last = d;
        }
        CHECK(last < 0.05);
    }
    CHECK_THROWS_AS(cf_flat_exact({1, 0, 0}, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(cf_flat_exact({1, 0, 0}, 1.0, -1.0), DomainError);
}

TEST_CASE("cf_flat_girsanov")
{
    McOptions mc;
    mc.n_paths = 100000;
    mc.master_seed = 31;
    const auto zero = cf_flat_girsanov({}, 1.0, 1.0, mc);
    CHECK(zero.value.real() == 1.0);
    CHECK(zero.stderr == 0.0);

    const auto g = cf_flat_girsanov({1, 0, 0}, 1.0, 1.0, mc);
    CHECK(std::abs(g.value.real() - cf_flat_exact({1, 0, 0}, 1.0, 1.0).value.real()) < 3.0 * g.stderr);

    // |lambda| = 2 at t = 10 against the clock functional of the dimension-4 process
    mc.n_paths = 20000;
    const auto g10 = cf_flat_girsanov({0, 2, 0}, 10.0, 1.0, mc);
    SimOptions sim{32, 1, StepPolicy::geometric(1e-3, 1.0, 2.0, 1000)};
    const auto s = simulate_timechange(Geometry(GeometryKind::flat_H, 1.0), 10.0, 5000, sim);
    const auto rb = rao_blackwell_cf(s, {0, 2, 0});
    CHECK(std::abs(g10.value.real() - rb.value.real()) < 3.0 * std::hypot(g10.stderr, rb.stderr));
}

TEST_CASE("cf_hp1_identity")
{
    McOptions mc;
    mc.n_paths = 5000;
    mc.master_seed = 33;
    mc.policy = StepPolicy::uniform(1e-3);
    const auto zero = cf_hp1_identity({}, 1.0, kPi / 4, mc);
    CHECK(zero.value.real() == doctest::Approx(1.0));

    const auto id = cf_hp1_identity({1, 0, 0}, 1.0, kPi / 4, mc);
    SimOptions sim{34, 1, StepPolicy::uniform(2.5e-4)};
    const auto s = simulate_timechange(Geometry(GeometryKind::projective_HP1, kPi / 4), 1.0, 5000, sim);
    const auto rb = rao_blackwell_cf(s, {1, 0, 0});
    CHECK(std::abs(id.value.real() - rb.value.real()) < 3.0 * std::hypot(id.stderr, rb.stderr));
    CHECK_THROWS_AS(cf_hp1_identity({1, 0, 0}, 1.0, 2.0, mc), DomainError);
}

TEST_CASE("cf_hh1_limit")
{
    CHECK(cf_hh1_limit({}, 1.0).value.real() == 1.0);
    const double c = std::cosh(1.0);
    CHECK(cf_hh1_limit({std::sqrt(3.0), 0, 0}, 1.0).value.real() ==
          doctest::Approx(std::tanh(1.0) * (1.0 + 1.0 / (2.0 * c * c))).epsilon(1e-14));
    for (double l : {0.5, 1.0, 5.0, 50.0})
        CHECK(std::abs(cf_hh1_limit({l, 0, 0}, 30.0).value.real() - 1.0) < 1e-10);
    for (double l : {0.1, 1.0, 3.0})
        for (double r0 : {0.1, 1.0, 3.0}) {
            const double v = cf_hh1_limit({l, 0, 0}, r0).value.real();
            CHECK(v <= 1.0);
            CHECK(v > 0.0);
        }
    CHECK_THROWS_AS(cf_hh1_limit({1, 0, 0}, 0.0), DomainError);
}

TEST_CASE("cf_hh1_identity")
{
    McOptions mc;
    mc.n_paths = 20000;
    mc.master_seed = 35;
    mc.policy = StepPolicy::uniform(2e-3);

    SUBCASE("zero frequency at t = 3, plain estimator")
    {
        const auto e = cf_hh1_identity({}, 3.0, 1.0, mc, false);
        const double c2 = std::pow(std::cosh(1.0), 2);
        const double ref = std::exp(-12.0) / c2 * (0.5 + std::exp(12.0) * (c2 - 0.5));
        CHECK(std::abs(e.value.real() - ref) < 3.0 * e.stderr);
        CHECK(e.stderr > 0.0);
    }
    SUBCASE("control variate agrees with the plain estimator")
    {
        mc.n_paths = 10000;
        const auto a = cf_hh1_identity({1, 0, 0}, 1.0, 1.0, mc, true);
        const auto b = cf_hh1_identity({1, 0, 0}, 1.0, 1.0, mc, false);
        CHECK(a.stderr < b.stderr);
        mc.master_seed = 36;
        const auto c = cf_hh1_identity({1, 0, 0}, 1.0, 1.0, mc, false);
        CHECK(std::abs(a.value.real() - c.value.real()) < 3.0 * std::hypot(a.stderr, c.stderr));
    }
    SUBCASE("approaches the limit along t = 1, 3, 5")
    {
        mc.n_paths = 4000;
        const double lim = cf_hh1_limit({1, 0, 0}, 1.0).value.real();
        double prev = std::numeric_limits<double>::infinity();
        for (double t : {1.0, 3.0, 5.0}) {
            const double d = std::abs(cf_hh1_identity({1, 0, 0}, t, 1.0, mc).value.real() - lim);
            CHECK(d < prev);
            prev = d;
        }
    }
}

TEST_CASE("cosh2_moment")
{
    CHECK(cosh2_moment(1.5, 1.5, 1.0, 0.0) == std::pow(std::cosh(1.0), 2));
    CHECK(cosh2_moment(1.5, 1.5, 1.0, 0.5) ==
          doctest::Approx(0.5 + std::exp(4.0) * (std::pow(std::cosh(1.0), 2) - 0.5)).epsilon(1e-14));
    for (auto [a, b] : {std::pair{1.5, 1.5}, std::pair{2.5, -1.5}, std::pair{0.7, 0.2}}) {
        const double ref = rk4_cosh2(a, b, 1.0, 0.5, 20000);
        CHECK(std::abs(cosh2_moment(a, b, 1.0, 0.5) - ref) < 1e-10 * std::abs(ref));
    }
    CHECK_THROWS_AS(cosh2_moment(0.5, -1.5, 1.0, 1.0), DomainError);
}

TEST_CASE("relativistic Cauchy density")
{
    for (double y : {0.5, 1.0, 2.0}) {
        auto f = [y](double r) { return relativistic_cauchy_density_radial(r, y); };
        CHECK(radial_cf(f, 0.0) == doctest::Approx(1.0).epsilon(1e-6));
        for (double l : {0.5, 1.0, 3.0})
            CHECK(std::abs(radial_cf(f, l) - std::exp(-y * (std::sqrt(l * l + 1.0) - 1.0))) < 1e-5);
    }
    const double a = relativistic_cauchy_density({0.3, -0.4, 1.2}, 1.0);
    CHECK(a == doctest::Approx(relativistic_cauchy_density({1.3, 0.0, 0.0}, 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(relativistic_cauchy_density_radial(1.0, 0.0), DomainError);
}

TEST_CASE("radial_cf")
{
    const double norm = std::pow(2.0 * kPi, -1.5);
    auto gauss = [norm](double r) { return norm * std::exp(-0.5 * r * r); };
    CHECK(radial_cf(gauss, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    for (double l : {0.3, 1.0, 2.5})
        CHECK(std::abs(radial_cf(gauss, l) - std::exp(-0.5 * l * l)) < 1e-8);

    DensityGrid g;
    for (int i = 0; i <= 4000; ++i) {
        const double r = 12.0 * i / 4000.0;
        g.radii.push_back(r);
        g.values.push_back(gauss(r));
    }
    CHECK(radial_cf(g, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(radial_cf(g, 1.0) - std::exp(-0.5)) < 1e-9);
    g.radii[3] = g.radii[2];
    CHECK_THROWS_AS(radial_cf(g, 1.0), DomainError);
}

TEST_CASE("hh1 limit density")
{
    SUBCASE("derivative term matches central differences")
    {
        for (double r0 : {0.5, 1.0, 2.0})
            for (double rho : {0.0, 0.3, 1.0, 4.0}) {
                const double h = 1e-5;
                auto p = [rho](double u) { return relativistic_cauchy_density_radial(rho, -std::log(std::tanh(u))); };
                const double fd = 0.5 * std::tanh(r0) * (p(r0 + h) - p(r0 - h)) / (2.0 * h);
                const auto terms = hh1_limit_density_terms(rho, r0);
                INFO("r0=" << r0 << " rho=" << rho);
                CHECK(terms.derivative == doctest::Approx(fd).epsilon(1e-6));
                CHECK(terms.cauchy == doctest::Approx(p(r0)).epsilon(1e-13));
            }
    }
    SUBCASE("grid transform reproduces the limit characteristic function")
    {
        for (double r0 : {0.5, 1.0, 2.0}) {
            const auto grid = hh1_limit_density_grid(r0, 400.0, 8001);
            for (double v : grid.values)
                CHECK(v >= 0.0);
            CHECK(std::abs(radial_cf(grid, 0.0) - 1.0) < 1e-4);
            for (double l : {0.5, 1.0, 2.0, 4.0})
                CHECK(std::abs(radial_cf(grid, l) - cf_hh1_limit({l, 0, 0}, r0).value.real()) < 1e-4);
        }
    }
    CHECK(hh1_limit_density({0.0, 3.0, 4.0}, 1.0) == doctest::Approx(hh1_limit_density_radial(5.0, 1.0)));
    CHECK_THROWS_AS(hh1_limit_density_grid(1.0, 10.0, 2), DomainError);
}

TEST_CASE("hp1 clock rate")
{
    // stationary density of dr = 3 cot(2r) dt + dW is proportional to sin^3(2r)
    // E[4 / sin^2(2r)] under it
    const double num = integrate([](double r) { return 4.0 * std::sin(2.0 * r); }, 0.0, kPi / 2).value;
    const double den = integrate([](double r) { return std::pow(std::sin(2.0 * r), 3); }, 0.0, kPi / 2).value;
    CHECK(num / den == doctest::Approx(6.0).epsilon(1e-10));

    SimOptions sim{37, 1, StepPolicy::uniform(1e-3)};
    const double t = 10.0;
    const auto s = simulate_timechange(Geometry(GeometryKind::projective_HP1, kPi / 4), t, 1000, sim);
    std::vector<double> rate;
    for (const auto& x : s)
        rate.push_back(*x.clock / t);
    const auto m = mean_and_stderr(rate);
    CHECK(std::abs(m.mean - 6.0) < 0.3 + 3.0 * m.stderr);

    // hence the sqrt(t)-scaled characteristic function tends to exp(-3 |lambda|^2)
    const auto cf = rao_blackwell_cf_scaled(s, {1, 0, 0}, std::sqrt(t));
    CHECK(std::abs(cf.value.real() - std::exp(-3.0)) < 0.02 + 3.0 * cf.stderr);
}
