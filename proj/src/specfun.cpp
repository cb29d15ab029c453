#include "qwind/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "qwind/errors.hpp"

namespace qwind {

namespace detail {

double log_bessel_i_series(double nu, double x)
{
    // sum_k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)); all terms positive, so sum
    // relative to the largest term.
    const double q = 2.0 * std::log(0.5 * x);
    const double lead = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);

    // Peak of the term sequence: (x/2)^2 = (k+1)(k+1+nu).
    const double disc = nu * nu + x * x;
    const auto kpeak = static_cast<long>(std::max(0.0, std::floor(0.5 * (std::sqrt(disc) - nu))));
    double lpeak = 0.0;
    for (long k = 1; k <= kpeak; ++k)
        lpeak += q - std::log(static_cast<double>(k)) - std::log(k + nu);

    double sum = 1.0;
    double lt = lpeak;
    for (long k = kpeak; k > 0; --k) {
        lt -= q - std::log(static_cast<double>(k)) - std::log(k + nu);
        const double term = std::exp(lt - lpeak);
        sum += term;
        if (term < 1e-18 * sum)
            break;
    }
    lt = lpeak;
    for (long k = kpeak + 1;; ++k) {
        lt += q - std::log(static_cast<double>(k)) - std::log(k + nu);
        const double term = std::exp(lt - lpeak);
        sum += term;
        if (term < 1e-18 * sum)
            break;
    }
    return lead + lpeak + std::log(sum);
}

double log_bessel_i_asymptotic(double nu, double x)
{
    // I_nu(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(nu) / x^k
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        const double mag = std::abs(term);
        if (mag < 1e-17 * std::abs(sum))
            return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum + term);
        if (mag > prev)
            break;  // diverging before reaching full precision
        sum += term;
        prev = mag;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

LogValue bessel_i(double nu, double x)
{
    if (!(nu >= 0.0) || !(x >= 0.0))
        throw DomainError("bessel_i: requires nu >= 0 and x >= 0");
    if (x == 0.0)
        return nu == 0.0 ? LogValue{0.0, 1} : LogValue{};
    if (x > kBesselSeriesLimit) {
        const double la = detail::log_bessel_i_asymptotic(nu, x);
        if (std::isfinite(la))
            return {la, 1};
    }
    return {detail::log_bessel_i_series(nu, x), 1};
}

LogValue bessel_k(double nu, double x)
{
    if (!(nu >= 0.0) || !(x > 0.0))
        throw DomainError("bessel_k: requires nu >= 0 and x > 0");
    // K_nu(x) = e^{-x} int_0^inf exp(-x (cosh s - 1)) cosh(nu s) ds. The
    // integrand peaks near s* = asinh(nu / x) and decays doubly exponentially.
    const double speak = std::asinh(nu / x);
    auto expo = [=](double s) {
        const double sh = std::sinh(0.5 * s);
        const double c = 2.0 * sh * sh;
        return -x * c + nu * s + std::log1p(std::exp(-2.0 * nu * s)) - std::numbers::ln2;
    };
    const double epeak = expo(speak);
    // Cut where the integrand is below 1e-30 of its peak.
    double hi = speak + 1.0;
    while (expo(hi) - epeak > -70.0)
        hi = speak + 2.0 * (hi - speak);
    QuadOptions opts;
    opts.rel_tol = 1e-14;
    const auto f = [&](double s) { return std::exp(expo(s) - epeak); };
    double acc = 0.0;
    if (speak > 0.0)
        acc += integrate(f, 0.0, speak, opts).value;
    acc += integrate(f, speak, hi, opts).value;
    return {-x + epeak + std::log(acc), 1};
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1)
            resg += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts)
{
    if (!(b >= a))
        throw DomainError("integrate: requires a <= b");
    if (a == b)
        return {};

    std::function<double(double)> g = f;
    double lo = a, hi = b;
    if (std::isinf(b)) {
        const double L = opts.scale;
        g = [&f, a, L](double s) {
            const double om = 1.0 - s;
            const double v = f(a + L * s / om);
            return v == 0.0 ? 0.0 : v * L / (om * om);
        };
        lo = 0.0;
        hi = 1.0;
    }

    std::priority_queue<Panel> heap;
    Panel first = gk15(g, lo, hi);
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int intervals = 1;
    while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (intervals >= opts.max_subdivisions)
            throw AccuracyError("integrate: subdivision budget exhausted", total, err);
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel too narrow to split further: accept what we have.
            heap.push({worst.a, worst.b, worst.value, 0.0});
            err -= worst.error;
            continue;
        }
        const Panel l = gk15(g, worst.a, mid);
        const Panel r = gk15(g, mid, worst.b);
        heap.push(l);
        heap.push(r);
        ++intervals;
        // Resum from the heap periodically to limit drift in the running totals.
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        if (intervals % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, err, intervals};
}

}  // namespace qwind
