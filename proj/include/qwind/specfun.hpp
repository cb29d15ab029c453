#pragma once

#include <cmath>
#include <functional>
#include <limits>

namespace qwind {

/// sign * exp(log_magnitude). Zero is {-inf, 0}.
struct LogValue
{
    double log_magnitude = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static LogValue from(double v)
    {
        if (v == 0.0)
            return {};
        return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
    }
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

/// Switchover between the power series and the large-argument expansion.
inline constexpr double kBesselSeriesLimit = 25.0;

/// log I_nu(x) for real nu >= 0, x >= 0.
LogValue bessel_i(double nu, double x);

namespace detail {
// Exposed for the switchover self-consistency tests.
double log_bessel_i_series(double nu, double x);
/// Returns NaN when the asymptotic series cannot reach double precision.
double log_bessel_i_asymptotic(double nu, double x);
}  // namespace detail

/// log K_nu(x) for real nu >= 0 and x > 0, from the integral
/// K_nu(x) = int_0^inf exp(-x cosh s) cosh(nu s) ds.
LogValue bessel_k(double nu, double x);

inline LogValue bessel_k2(double x) { return bessel_k(2.0, x); }

struct QuadOptions
{
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    /// Length scale of the decay for infinite upper limits: x = a + scale*s/(1-s).
    double scale = 1.0;
    int max_subdivisions = 4000;
};

struct QuadResult
{
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]; b may be
/// +infinity. Throws AccuracyError carrying the best estimate when the
/// subdivision budget runs out.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

}  // namespace qwind
