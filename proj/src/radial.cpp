#include "qwind/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qwind/errors.hpp"

namespace qwind {

double clock_weight(ClockKind kind, double r)
{
    switch (kind) {
    case ClockKind::none:
        return 0.0;
    case ClockKind::inv_r_squared:
        return 1.0 / (r * r);
    case ClockKind::four_over_sin_sq_2r: {
        const double s = std::sin(2.0 * r);
        return 4.0 / (s * s);
    }
    case ClockKind::four_over_sinh_sq_2r: {
        if (r > 200.0)
            return 0.0;
        const double s = std::sinh(2.0 * r);
        return 4.0 / (s * s);
    }
    }
    return 0.0;
}

RadialSpec::RadialSpec(RadialKind kind, double p0, double p1, double r0)
    : kind_(kind), p0_(p0), p1_(p1), r0_(r0)
{
    if (!inside(r0))
        throw DomainError("RadialSpec: r0 = " + std::to_string(r0) + " outside the state domain");
}

RadialSpec RadialSpec::bessel(double dimension, double r0)
{
    if (!(dimension >= 2.0))
        throw DomainError("RadialSpec: Bessel dimension must be >= 2 so that 0 is not attained");
    return {RadialKind::bessel, dimension, 0.0, r0};
}

RadialSpec RadialSpec::jacobi_trig(double c, double r0)
{
    // c cot(2r) ~ (c/2)/r at both ends; non-attainable iff c/2 >= 1/2.
    if (!(c >= 1.0))
        throw DomainError("RadialSpec: c cot(2r) drift with c < 1 attains the boundary");
    return {RadialKind::jacobi_trig, c, 0.0, r0};
}

RadialSpec RadialSpec::jacobi_hyp(double alpha, double beta, double r0)
{
    if (!(alpha >= 0.5))
        throw DomainError("RadialSpec: alpha coth(r) drift with alpha < 1/2 attains 0");
    if (!std::isfinite(beta))
        throw DomainError("RadialSpec: beta must be finite");
    return {RadialKind::jacobi_hyp, alpha, beta, r0};
}

double RadialSpec::drift(double r) const
{
    switch (kind_) {
    case RadialKind::bessel:
        return 0.5 * (p0_ - 1.0) / r;
    case RadialKind::jacobi_trig:
        return p0_ / std::tan(2.0 * r);
    case RadialKind::jacobi_hyp:
        return p0_ / std::tanh(r) + p1_ * std::tanh(r);
    }
    return 0.0;
}

double RadialSpec::drift_slope(double r) const
{
    switch (kind_) {
    case RadialKind::bessel:
        return -0.5 * (p0_ - 1.0) / (r * r);
    case RadialKind::jacobi_trig: {
        const double s = std::sin(2.0 * r);
        return -2.0 * p0_ / (s * s);
    }
    case RadialKind::jacobi_hyp: {
        if (r > 350.0)
            return 0.0;
        const double sh = std::sinh(r);
        const double ch = std::cosh(r);
        return -p0_ / (sh * sh) + p1_ / (ch * ch);
    }
    }
    return 0.0;
}

double RadialSpec::max_slope() const
{
    return kind_ == RadialKind::jacobi_hyp ? std::max(0.0, p1_) : 0.0;
}

double RadialSpec::upper_bound() const
{
    return kind_ == RadialKind::jacobi_trig ? 0.5 * std::numbers::pi
                                            : std::numeric_limits<double>::infinity();
}

std::vector<double> make_grid(const StepPolicy& policy, double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("make_grid: horizon must be positive and finite");
    if (!(policy.step > 0.0))
        throw DomainError("make_grid: step must be positive");

    std::vector<double> grid{0.0};
    auto uniform_segment = [&](double from, double to, double h) {
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((to - from) / h - 1e-9)));
        for (std::size_t i = 1; i <= n; ++i)
            grid.push_back(i == n ? to : from + (to - from) * static_cast<double>(i) / n);
    };

    if (policy.kind == StepPolicy::Kind::uniform) {
        uniform_segment(0.0, t, policy.step);
        return grid;
    }
    if (!(policy.ratio > 1.0) || policy.substeps < 1 || !(policy.geometric_start > 0.0))
        throw DomainError("make_grid: geometric policy needs ratio > 1, substeps >= 1, start > 0");
    const double start = std::min(policy.geometric_start, t);
    uniform_segment(0.0, start, policy.step);
    for (double s = start; s < t;) {
        const double e = std::min(policy.ratio * s, t);
        uniform_segment(s, e, (e - s) / policy.substeps);
        s = e;
    }
    return grid;
}

double implicit_step(const RadialSpec& spec, double r, double h, double dw, std::size_t step_index)
{
    const double target = r + dw;
    auto g = [&](double x) { return x - h * spec.drift(x) - target; };

    double lo = 0.0;
    double hi = spec.upper_bound();
    if (std::isinf(hi)) {
        hi = std::max(target, r) + 1.0;
        for (int i = 0; g(hi) <= 0.0; ++i) {
            if (i == 100)
                throw StepFailure("implicit_step: could not bracket the root", step_index, r);
            hi *= 2.0;
        }
    }

    double x = r + h * spec.drift(r) + dw;  // explicit predictor
    if (!(x > lo && x < hi))
        x = (target > lo && target < hi) ? target : 0.5 * (lo + hi);

    for (int it = 0; it < 200; ++it) {
        const double gx = g(x);
        if (gx == 0.0)
            return x;
        if (gx > 0.0)
            hi = x;
        else
            lo = x;
        double next = x - gx / (1.0 - h * spec.drift_slope(x));
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        const double tol = 1e-12 * std::max(1.0, std::abs(x));
        if (std::abs(next - x) <= tol || hi - lo <= tol) {
            if (!spec.inside(next))
                break;
            return next;
        }
        x = next;
    }
    throw StepFailure("implicit_step: root finder did not converge", step_index, r);
}

namespace {

void check_step_bound(const RadialSpec& spec, std::span<const double> grid)
{
    if (grid.empty() || grid.front() != 0.0)
        throw DomainError("radial simulation: grid must start at 0");
    double hmax = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double h = grid[i] - grid[i - 1];
        if (!(h > 0.0))
            throw DomainError("radial simulation: grid must be strictly increasing");
        hmax = std::max(hmax, h);
    }
    if (hmax * spec.max_slope() >= 1.0)
        throw DomainError("radial simulation: step too large for a monotone implicit equation");
}

template <class Visit>
void run_implicit(const RadialSpec& spec, std::span<const double> grid, ClockKind clock,
                  RngStream& stream, Visit&& visit)
{
    double r = spec.r0();
    double w = clock_weight(clock, r);
    double a = 0.0;
    visit(std::size_t{0}, r, a);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double h = grid[i] - grid[i - 1];
        r = implicit_step(spec, r, h, std::sqrt(h) * stream.normal(), i);
        const double wn = clock_weight(clock, r);
        a += 0.5 * h * (w + wn);
        w = wn;
        visit(i, r, a);
    }
}

template <class Visit>
void run_bessel4(double r0, std::span<const double> grid, RngStream& stream, Visit&& visit)
{
    if (!(r0 > 0.0))
        throw DomainError("simulate_bessel4_exact: r0 must be positive");
    if (grid.empty() || grid.front() != 0.0)
        throw DomainError("simulate_bessel4_exact: grid must start at 0");
    double x0 = r0, x1 = 0.0, x2 = 0.0, x3 = 0.0;
    double w = 1.0 / (r0 * r0);
    double a = 0.0;
    visit(std::size_t{0}, r0, a);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double h = grid[i] - grid[i - 1];
        if (!(h > 0.0))
            throw DomainError("simulate_bessel4_exact: grid must be strictly increasing");
        const double sd = std::sqrt(h);
        x0 += sd * stream.normal();
        x1 += sd * stream.normal();
        x2 += sd * stream.normal();
        x3 += sd * stream.normal();
        const double r2 = x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3;
        const double wn = 1.0 / r2;
        a += 0.5 * h * (w + wn);
        w = wn;
        visit(i, std::sqrt(r2), a);
    }
}

}  // namespace

RadialPath simulate_bessel4_exact(double r0, std::span<const double> grid, RngStream& stream)
{
    RadialPath path;
    path.times.assign(grid.begin(), grid.end());
    path.values.resize(grid.size());
    path.clock.resize(grid.size());
    run_bessel4(r0, grid, stream, [&](std::size_t i, double r, double a) {
        path.values[i] = r;
        path.clock[i] = a;
    });
    return path;
}

RadialEndpoint bessel4_exact_endpoint(double r0, std::span<const double> grid, RngStream& stream)
{
    RadialEndpoint end;
    run_bessel4(r0, grid, stream, [&](std::size_t, double r, double a) { end = {r, a}; });
    return end;
}

double sample_bessel_endpoint(double dimension, double r0, double t, RngStream& stream)
{
    if (!(dimension >= 1.0) || !(r0 >= 0.0) || !(t > 0.0))
        throw DomainError("sample_bessel_endpoint: requires dimension >= 1, r0 >= 0, t > 0");
    const double lead = r0 + std::sqrt(t) * stream.normal();
    double r2 = lead * lead;
    if (dimension > 1.0)
        r2 += 2.0 * t * stream.gamma(0.5 * (dimension - 1.0));
    return std::sqrt(r2);
}

RadialPath simulate_radial_implicit(const RadialSpec& spec, std::span<const double> grid,
                                    ClockKind clock, RngStream& stream)
{
    check_step_bound(spec, grid);
    RadialPath path;
    path.times.assign(grid.begin(), grid.end());
    path.values.resize(grid.size());
    path.clock.resize(grid.size());
    run_implicit(spec, grid, clock, stream, [&](std::size_t i, double r, double a) {
        path.values[i] = r;
        path.clock[i] = a;
    });
    return path;
}

RadialEndpoint radial_implicit_endpoint(const RadialSpec& spec, std::span<const double> grid,
                                        ClockKind clock, RngStream& stream)
{
    check_step_bound(spec, grid);
    RadialEndpoint end;
    run_implicit(spec, grid, clock, stream, [&](std::size_t, double r, double a) { end = {r, a}; });
    return end;
}

RadialPath simulate_radial_implicit(const RadialSpec& spec, double t, const StepPolicy& policy,
                                    ClockKind clock, RngStream& stream)
{
    if (!(t > 0.0))
        throw DomainError("simulate_radial_implicit: t must be positive");
    const auto grid = make_grid(policy, t);
    return simulate_radial_implicit(spec, grid, clock, stream);
}

}  // namespace qwind
