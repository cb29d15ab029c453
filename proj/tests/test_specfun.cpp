#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "qwind/errors.hpp"
#include "qwind/specfun.hpp"

using namespace qwind;

namespace {

double series_oracle(double nu, double x, int terms)
{
    const double q = 0.25 * x * x;
    double term = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 0; k + 1 < terms; ++k) {
        term *= q / ((k + 1.0) * (k + 1.0 + nu));
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("bessel_i special values")
{
    const LogValue z = bessel_i(1.0, 0.0);
    CHECK(z.sign == 0);
    CHECK(z.value() == 0.0);
    CHECK(bessel_i(0.0, 0.0).value() == 1.0);

    const double oracle = series_oracle(std::numbers::sqrt2, 0.5, 30);
    CHECK(bessel_i(std::numbers::sqrt2, 0.5).value() == doctest::Approx(oracle).epsilon(1e-12));

    for (double nu : {1.0, 2.0}) {
        const double x = 500.0;
        CHECK(std::abs(bessel_i(nu, x).log_magnitude - (x - 0.5 * std::log(2.0 * std::numbers::pi * x) - (4.0 * nu * nu - 1.0) / (8.0 * x))) < 1e-5);
    }
    CHECK_THROWS_AS(bessel_i(-0.5, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_i(1.0, -1.0), DomainError);
}

TEST_CASE("bessel_i against boost")
{
    for (double nu : {0.0, 0.5, 1.0, std::numbers::sqrt2, 2.0, 3.7, 10.0, 25.0})
        for (double x : {1e-3, 0.1, 1.0, 5.0, 20.0, 24.9, 25.1, 40.0, 100.0, 600.0}) {
            const double ref = boost::math::cyl_bessel_i(nu, x);
            const double got = bessel_i(nu, x).log_magnitude;
            INFO("nu=" << nu << " x=" << x);
            CHECK(std::abs(got - std::log(ref)) < 1e-10 * std::max(1.0, std::abs(std::log(ref))));
        }
}

TEST_CASE("bessel_i series/asymptotic overlap")
{
    for (double nu : {0.0, 1.0, std::numbers::sqrt2, 2.0, 3.0})
        for (double x : {25.0, 30.0, 40.0}) {
            const double s = detail::log_bessel_i_series(nu, x);
            const double a = detail::log_bessel_i_asymptotic(nu, x);
            INFO("nu=" << nu << " x=" << x);
            REQUIRE(std::isfinite(a));
            CHECK(std::abs(std::expm1(s - a)) < 1e-10);
        }
}

TEST_CASE("bessel_i monotonicity and recurrence")
{
    for (double nu : {0.5, 1.0, 2.2, 5.0}) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double x = 0.1; x < 60.0; x *= 1.3) {
            const double v = bessel_i(nu, x).log_magnitude;
            CHECK(v > prev);
            prev = v;
            CHECK(bessel_i(nu + 0.25, x).log_magnitude < v);
        }
    }
    for (double nu : {1.0, 1.5, 2.0, 3.3, 6.0})
        for (double x : {0.3, 2.0, 10.0, 24.0, 26.0, 80.0}) {
            const double lhs_log_scale = bessel_i(nu, x).log_magnitude;
            const double a = std::exp(bessel_i(nu - 1.0, x).log_magnitude - lhs_log_scale);
            const double b = std::exp(bessel_i(nu + 1.0, x).log_magnitude - lhs_log_scale);
            INFO("nu=" << nu << " x=" << x);
            CHECK((a - b) == doctest::Approx(2.0 * nu / x).epsilon(1e-8));
        }
}

TEST_CASE("bessel_k")
{
    const double x0 = 1e-4;
    CHECK(x0 * x0 * bessel_k2(x0).value() == doctest::Approx(2.0).epsilon(1e-6));

    const double x = 50.0;
    const double k2 = bessel_k2(x).value();
    const double lead = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    CHECK(std::abs(k2 / lead - 1.0) < 0.05);
    const double e = 8.0 * x;
    CHECK(std::abs(k2 / (lead * (1.0 + 15.0 / e + 105.0 / (2.0 * e * e))) - 1.0) < 1e-4);

    for (double nu : {0.0, 0.5, 1.0, 2.0, 2.5, 4.0})
        for (double xx : {1e-3, 0.05, 0.7, 3.0, 12.0, 60.0, 300.0}) {
            const double ref = boost::math::cyl_bessel_k(nu, xx);
            INFO("nu=" << nu << " x=" << xx);
            CHECK(std::abs(bessel_k(nu, xx).log_magnitude - std::log(ref)) < 1e-10 * std::max(1.0, std::abs(std::log(ref))));
        }
    CHECK_THROWS_AS(bessel_k2(0.0), DomainError);
    CHECK_THROWS_AS(bessel_k2(-1.0), DomainError);
}

TEST_CASE("relativistic Cauchy normalisation integral")
{
    const double y = 1.0;
    QuadOptions o;
    o.rel_tol = 1e-10;
    const double v = integrate(
        [&](double r) {
            const double s2 = r * r + y * y;
            return 4.0 * std::numbers::pi * r * r * std::exp(bessel_k(2.0, std::sqrt(s2)).log_magnitude) / s2;
        },
        0.0, std::numeric_limits<double>::infinity(), o).value;
    CHECK(v == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi * std::exp(-y) / y).epsilon(1e-6));
}

TEST_CASE("integrate")
{
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(integrate([](double r) { return std::exp(-0.5 * r * r) * r * r; }, 0.0, inf).value ==
          doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-10));
    QuadOptions tight;
    tight.rel_tol = 1e-13;
    CHECK(integrate([](double r) { return std::sin(r); }, 0.0, std::numbers::pi, tight).value ==
          doctest::Approx(2.0).epsilon(1e-12));

    // total mass of the Bessel semigroup density at t = rho = 1
    tight.rel_tol = 1e-12;
    const double mass =
        std::exp(-0.5) *
        integrate([](double r) { return r <= 0.0 ? 0.0 : std::exp(bessel_i(1.0, r).log_magnitude - 0.5 * r * r) * r * r; },
                  0.0, inf, tight).value;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

    // independent fixed-grid Simpson oracle for the same integral
    const int n = 20000;
    const double b = 20.0, h = b / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = i * h;
        const double f = r == 0.0 ? 0.0 : boost::math::cyl_bessel_i(1.0, r) * std::exp(-0.5 * r * r) * r * r;
        s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    CHECK(std::exp(-0.5) * s * h / 3.0 == doctest::Approx(1.0).epsilon(1e-8));

    SUBCASE("linearity")
    {
        auto f = [](double x) { return std::cos(3.0 * x) * std::exp(-x); };
        auto g = [](double x) { return 1.0 / (1.0 + x * x); };
        for (auto [al, be] : {std::pair{2.0, -1.5}, std::pair{0.3, 4.0}}) {
            const double lhs = integrate([&](double x) { return al * f(x) + be * g(x); }, 0.0, 5.0, tight).value;
            const double rhs = al * integrate(f, 0.0, 5.0, tight).value + be * integrate(g, 0.0, 5.0, tight).value;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
    SUBCASE("budget exhaustion")
    {
        QuadOptions tiny;
        tiny.rel_tol = 1e-14;
        tiny.max_subdivisions = 3;
        try {
            integrate([](double x) { return std::sqrt(x) * std::sin(50.0 * x); }, 0.0, 10.0, tiny);
            FAIL("expected AccuracyError");
        } catch (const AccuracyError& e) {
            CHECK(std::isfinite(e.estimate()));
            CHECK(e.error_bound() > 0.0);
        }
    }
}
