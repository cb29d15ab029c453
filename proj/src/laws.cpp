#include "qwind/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qwind/errors.hpp"
#include "qwind/parallel.hpp"
#include "qwind/specfun.hpp"
#include "qwind/stats.hpp"

namespace qwind {

namespace {

constexpr double kPi = std::numbers::pi;

double log_cosh(double r)
{
    const double a = std::abs(r);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double log_tanh(double r)
{
    // log(1 - 2/(e^{2r}+1)), accurate for large r
    return std::log1p(-2.0 / (std::exp(2.0 * r) + 1.0));
}

double sinc(double z)
{
    if (std::abs(z) < 1e-4)
        return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

CfEstimate from_stats(const WindingVector& lambda, const MeanStats& s, double scale = 1.0)
{
    CfEstimate est;
    est.lambda = lambda;
    est.value = {scale * s.mean, 0.0};
    est.stderr = std::abs(scale) * s.stderr;
    return est;
}

template <class PathValue>
std::vector<double> per_path(const McOptions& mc, PathValue&& value)
{
    if (mc.n_paths == 0)
        throw DomainError("Monte Carlo estimator: n_paths must be positive");
    std::vector<double> values(mc.n_paths);
    parallel_for(mc.n_paths, mc.workers, [&](std::size_t i) { values[i] = value(i); });
    return values;
}

}  // namespace

double girsanov_tilt(const WindingVector& lambda)
{
    const double l2 = lambda.norm2();
    // sqrt(1+x) - 1 without cancellation
    return l2 / (std::sqrt(1.0 + l2) + 1.0);
}

CfEstimate cf_flat_exact(const WindingVector& lambda, double t, double rho)
{
    if (!(t > 0.0) || !(rho > 0.0))
        throw DomainError("cf_flat_exact: t and rho must be positive");
    const double nu = std::sqrt(1.0 + lambda.norm2());
    const double log_pre = -rho * rho / (2.0 * t) - std::log(t * rho);
    auto f = [&](double r) {
        if (r <= 0.0)
            return 0.0;
        const LogValue bi = bessel_i(nu, r * rho / t);
        if (bi.sign == 0)
            return 0.0;
        return std::exp(bi.log_magnitude - r * r / (2.0 * t) + 2.0 * std::log(r) + log_pre);
    };

    // The integrand lives on r in [0, rho + O(sqrt t)]; the truncation point
    // 12 sqrt(t) + t rho is kept as the outer limit.
    const double body_end = rho + 12.0 * std::sqrt(t);
    const double outer = std::max(12.0 * std::sqrt(t) + t * rho, body_end);
    QuadOptions opts;
    opts.rel_tol = 1e-12;
    double value = 0.0;
    for (int k = 0; k < 4; ++k)
        value += integrate(f, body_end * k / 4.0, body_end * (k + 1) / 4.0, opts).value;
    if (outer > body_end) {
        QuadOptions tail = opts;
        tail.abs_tol = 1e-16 * std::abs(value);
        value += integrate(f, body_end, outer, tail).value;
    }
    CfEstimate est;
    est.lambda = lambda;
    est.value = {value, 0.0};
    return est;
}

double flat_tilted_dimension(double mu) { return 2.0 * mu + 4.0; }

CfEstimate cf_flat_girsanov(const WindingVector& lambda, double t, double rho, const McOptions& mc)
{
    if (!(t > 0.0) || !(rho > 0.0))
        throw DomainError("cf_flat_girsanov: t and rho must be positive");
    const double mu = girsanov_tilt(lambda);
    if (mu == 0.0)
        return {lambda, {1.0, 0.0}, 0.0, 0.0};
    const double dim = flat_tilted_dimension(mu);
    const double log_rho = std::log(rho);
    const auto values = per_path(mc, [&](std::size_t i) {
        RngStream rng(mc.master_seed, i, Substream::endpoint);
        const double r = sample_bessel_endpoint(dim, rho, t, rng);
        return std::exp(mu * (log_rho - std::log(r)));
    });
    return from_stats(lambda, mean_and_stderr(values));
}

CfEstimate cf_hp1_identity(const WindingVector& lambda, double t, double r0, const McOptions& mc)
{
    if (!(t > 0.0) || !(r0 > 0.0 && r0 < 0.5 * kPi))
        throw DomainError("cf_hp1_identity: requires t > 0 and 0 < r0 < pi/2");
    const double mu = girsanov_tilt(lambda);
    if (mu == 0.0)
        return {lambda, {1.0, 0.0}, 0.0, 0.0};
    const RadialSpec spec = RadialSpec::jacobi_trig(2.0 * mu + 3.0, r0);
    const auto grid = make_grid(mc.policy, t);
    const double log_pre = mu * std::log(std::sin(2.0 * r0)) - 2.0 * (lambda.norm2() + mu) * t;
    const auto values = per_path(mc, [&](std::size_t i) {
        RngStream rng(mc.master_seed, i, Substream::radial);
        const RadialEndpoint end = radial_implicit_endpoint(spec, grid, ClockKind::none, rng);
        return std::exp(log_pre - mu * std::log(std::sin(2.0 * end.r)));
    });
    return from_stats(lambda, mean_and_stderr(values));
}

CfEstimate cf_hh1_limit(const WindingVector& lambda, double r0)
{
    if (!(r0 > 0.0))
        throw DomainError("cf_hh1_limit: r0 must be positive");
    const double nu = girsanov_tilt(lambda);
    const double sech2 = std::exp(-2.0 * log_cosh(r0));
    const double v = std::exp(nu * log_tanh(r0)) * (1.0 + 0.5 * nu * sech2);
    return {lambda, {v, 0.0}, 0.0, 0.0};
}

CfEstimate cf_hh1_identity(const WindingVector& lambda, double t, double r0, const McOptions& mc,
                           bool control_variate)
{
    if (!(t > 0.0) || !(r0 > 0.0))
        throw DomainError("cf_hh1_identity: t and r0 must be positive");
    const double nu = girsanov_tilt(lambda);
    const double alpha = 1.5 + nu;
    const double beta = -0.5 - nu;
    const RadialSpec spec = RadialSpec::jacobi_hyp(alpha, beta, r0);
    const auto grid = make_grid(mc.policy, t);
    const double prefactor = std::exp(nu * log_tanh(r0) - 2.0 * log_cosh(r0));

    // Everything is scaled by e^{-4t} inside the exponent, since cosh^2 r(t)
    // grows like e^{4t} in mean.
    const auto values = per_path(mc, [&](std::size_t i) {
        RngStream rng(mc.master_seed, i, Substream::radial);
        const double r = radial_implicit_endpoint(spec, grid, ClockKind::none, rng).r;
        const double log_c2 = 2.0 * log_cosh(r) - 4.0 * t;
        const double lt = -nu * log_tanh(r);
        if (control_variate)
            return std::exp(log_c2) * std::expm1(lt);
        return std::exp(log_c2 + lt);
    });
    const MeanStats s = mean_and_stderr(values);
    CfEstimate est = from_stats(lambda, s, prefactor);
    if (control_variate) {
        // e^{-4t} E[cosh^2 r(t)] with 1 + alpha + beta = 2 and (1+2beta)/4 = -nu/2.
        const double c = -0.5 * nu;
        const double scaled_moment = c * std::exp(-4.0 * t) + (std::exp(2.0 * log_cosh(r0)) - c);
        est.value = {prefactor * (scaled_moment + s.mean), 0.0};
    }
    return est;
}

double cosh2_moment(double alpha, double beta, double r0, double t)
{
    const double k = 1.0 + alpha + beta;
    if (k == 0.0)
        throw DomainError("cosh2_moment: 1 + alpha + beta = 0 is not covered");
    const double c = (1.0 + 2.0 * beta) / (2.0 * k);
    const double ch = std::cosh(r0);
    return c + std::exp(2.0 * k * t) * (ch * ch - c);
}

double relativistic_cauchy_density_radial(double rho, double y)
{
    if (!(y > 0.0))
        throw DomainError("relativistic_cauchy_density: y must be positive");
    const double s2 = rho * rho + y * y;
    const LogValue k2 = bessel_k2(std::sqrt(s2));
    return std::exp(std::log(y) + y - std::log(2.0 * kPi * kPi) + k2.log_magnitude - std::log(s2));
}

double relativistic_cauchy_density(const WindingVector& x, double y)
{
    return relativistic_cauchy_density_radial(x.norm(), y);
}

LimitDensityTerms hh1_limit_density_terms(double rho, double r0)
{
    if (!(r0 > 0.0))
        throw DomainError("hh1_limit_density: r0 must be positive");
    const double th = std::tanh(r0);
    const double y = -log_tanh(r0);
    const double s = std::sqrt(rho * rho + y * y);
    const double k2 = bessel_k(2.0, s).value();
    const double k1 = bessel_k(1.0, s).value();
    const double norm = 1.0 / (2.0 * kPi * kPi);

    // p(y) = y e^y g(s) / (2 pi^2), g(s) = K_2(s)/s^2, s = sqrt(rho^2 + y^2)
    const double g = k2 / (s * s);
    const double dg = -k1 / (s * s) - 4.0 * k2 / (s * s * s);
    const double ey = 1.0 / th;
    const double p = norm * y * ey * g;
    const double dp_dy = norm * (ey * (1.0 + y) * g + y * ey * dg * (y / s));
    // y(u) = -ln tanh u  =>  dy/du = -1 / (sinh u cosh u)
    const double dy_du = -1.0 / (std::sinh(r0) * std::cosh(r0));
    return {p, 0.5 * th * dp_dy * dy_du};
}

double hh1_limit_density_radial(double rho, double r0) { return hh1_limit_density_terms(rho, r0).total(); }

double hh1_limit_density(const WindingVector& x, double r0) { return hh1_limit_density_radial(x.norm(), r0); }

DensityGrid hh1_limit_density_grid(double r0, double rmax, std::size_t points)
{
    if (!(r0 > 0.0) || !(rmax > 0.0) || points < 3)
        throw DomainError("hh1_limit_density_grid: requires r0 > 0, rmax > 0, points >= 3");
    if (points % 2 == 0)
        ++points;  // Simpson pairs
    const double y = -log_tanh(r0);
    const double smax = std::asinh(rmax / y);
    DensityGrid grid;
    grid.start_radius = r0;
    grid.radii.resize(points);
    grid.values.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double rho = i + 1 == points ? rmax : y * std::sinh(smax * i / (points - 1.0));
        grid.radii[i] = rho;
        grid.values[i] = hh1_limit_density_radial(rho, r0);
    }
    return grid;
}

double radial_cf(const DensityGrid& density, double lambda_norm)
{
    const auto& x = density.radii;
    const auto& v = density.values;
    if (x.size() != v.size() || x.size() < 2)
        throw DomainError("radial_cf: grid needs matching radii/values and >= 2 points");
    if (!(lambda_norm >= 0.0))
        throw DomainError("radial_cf: |lambda| must be nonnegative");
    std::vector<double> f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0 && !(x[i] > x[i - 1]))
            throw DomainError("radial_cf: radii must be strictly increasing");
        f[i] = v[i] * x[i] * x[i] * sinc(lambda_norm * x[i]);
    }
    std::vector<double> pieces;
    pieces.reserve(x.size() / 2 + 1);
    std::size_t i = 0;
    for (; i + 2 < x.size(); i += 2) {
        const double h0 = x[i + 1] - x[i];
        const double h1 = x[i + 2] - x[i + 1];
        const double hs = h0 + h1;
        pieces.push_back(hs / 6.0 *
                         ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]));
    }
    if (i + 1 < x.size())
        pieces.push_back(0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]));
    return 4.0 * kPi * compensated_sum(pieces);
}

double radial_cf(const std::function<double(double)>& density, double lambda_norm, double rel_tol)
{
    if (!(lambda_norm >= 0.0))
        throw DomainError("radial_cf: |lambda| must be nonnegative");
    QuadOptions opts;
    opts.rel_tol = rel_tol;
    opts.max_subdivisions = 20000;
    auto f = [&](double rho) { return density(rho) * rho * rho * sinc(lambda_norm * rho); };
    return 4.0 * kPi * integrate(f, 0.0, std::numeric_limits<double>::infinity(), opts).value;
}

}  // namespace qwind
