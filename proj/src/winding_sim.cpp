#include "qwind/winding_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qwind/errors.hpp"
#include "qwind/parallel.hpp"

namespace qwind {

std::string_view to_string(GeometryKind kind)
{
    switch (kind) {
    case GeometryKind::flat_H:
        return "flat";
    case GeometryKind::projective_HP1:
        return "hp1";
    case GeometryKind::hyperbolic_HH1:
        return "hh1";
    }
    return "?";
}

GeometryKind parse_geometry(std::string_view name)
{
    if (name == "flat" || name == "flat_H")
        return GeometryKind::flat_H;
    if (name == "hp1" || name == "projective_HP1")
        return GeometryKind::projective_HP1;
    if (name == "hh1" || name == "hyperbolic_HH1")
        return GeometryKind::hyperbolic_HH1;
    throw DomainError("unknown geometry '" + std::string(name) + "' (expected flat, hp1 or hh1)");
}

Geometry::Geometry(GeometryKind kind, double start_radius) : kind_(kind), start_radius_(start_radius)
{
    if (!(start_radius > 0.0) || !std::isfinite(start_radius))
        throw DomainError("Geometry: start radius must be positive");
    if (kind == GeometryKind::projective_HP1 && !(start_radius < 0.5 * std::numbers::pi))
        throw DomainError("Geometry: HP1 start radius must be below pi/2");
}

RadialSpec Geometry::radial_spec() const
{
    switch (kind_) {
    case GeometryKind::flat_H:
        return RadialSpec::bessel(4.0, start_radius_);
    case GeometryKind::projective_HP1:
        return RadialSpec::jacobi_trig(3.0, start_radius_);
    case GeometryKind::hyperbolic_HH1:
        // 3 coth(2r) = (3/2)(coth r + tanh r)
        return RadialSpec::jacobi_hyp(1.5, 1.5, start_radius_);
    }
    throw DomainError("Geometry: bad kind");
}

ClockKind Geometry::clock_kind() const
{
    switch (kind_) {
    case GeometryKind::flat_H:
        return ClockKind::inv_r_squared;
    case GeometryKind::projective_HP1:
        return ClockKind::four_over_sin_sq_2r;
    case GeometryKind::hyperbolic_HH1:
        return ClockKind::four_over_sinh_sq_2r;
    }
    return ClockKind::none;
}

Quaternion Geometry::ambient_start() const
{
    switch (kind_) {
    case GeometryKind::flat_H:
        return {start_radius_, 0.0, 0.0, 0.0};
    case GeometryKind::projective_HP1:
        return {std::tan(start_radius_), 0.0, 0.0, 0.0};
    case GeometryKind::hyperbolic_HH1:
        return {std::tanh(start_radius_), 0.0, 0.0, 0.0};
    }
    return {};
}

WindingSample timechange_path(const Geometry& geom, std::span<const double> grid,
                              std::uint64_t master_seed, std::uint64_t path_index)
{
    RngStream radial(master_seed, path_index, Substream::radial);
    const RadialEndpoint end =
        geom.kind() == GeometryKind::flat_H
            ? bessel4_exact_endpoint(geom.start_radius(), grid, radial)
            : radial_implicit_endpoint(geom.radial_spec(), grid, geom.clock_kind(), radial);

    RngStream gauss(master_seed, path_index, Substream::winding);
    const double s = std::sqrt(end.clock);
    WindingSample out;
    out.zeta.v1 = s * gauss.normal();
    out.zeta.v2 = s * gauss.normal();
    out.zeta.v3 = s * gauss.normal();
    out.clock = end.clock;
    out.horizon = grid.back();
    return out;
}

namespace {

double dot4(const Quaternion& a, const Quaternion& b)
{
    return a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}

Quaternion gaussian_increment(RngStream& rng, double sd)
{
    const double a = rng.normal();
    const double b = rng.normal();
    const double c = rng.normal();
    const double d = rng.normal();
    return {sd * a, sd * b, sd * c, sd * d};
}

// Geodesic distance to the nearest point where the chart coefficients or the
// winding integrand degenerate. Steps are refined so that the Brownian
// displacement sqrt(h) stays below kRefine times this scale.
constexpr double kRefine = 0.25;

double singular_scale(GeometryKind kind, double w_norm)
{
    if (kind == GeometryKind::projective_HP1) {
        const double r = std::atan(w_norm);
        return std::min(r, 0.5 * std::numbers::pi - r);
    }
    return std::atanh(std::min(w_norm, 1.0 - 1e-16));
}

WindingSample curved_direct(const Geometry& geom, double t, double step, RngStream& rng,
                            const Quaternion& frame)
{
    const bool hp1 = geom.kind() == GeometryKind::projective_HP1;
    // dw = c dW + s c w dt with c = sec^2 r = 1 + |w|^2 (HP1, s = -2) or
    // c = sech^2 r = 1 - |w|^2 (HH1, s = +2).
    const double sign = hp1 ? 1.0 : -1.0;
    const double drift_sign = hp1 ? -2.0 : 2.0;

    Quaternion w = frame * geom.ambient_start();
    // coef = 1 + sign |w|^2 carried as its own state: on HH1 it is the defect
    // 1 - |w|^2, which cannot be recovered from |w| near the boundary.
    const double r0 = geom.start_radius();
    double coef = hp1 ? 1.0 / (std::cos(r0) * std::cos(r0)) : 1.0 / (std::cosh(r0) * std::cosh(r0));
    WindingVector zeta{};
    WindingVector comp{};
    double elapsed = 0.0;
    std::size_t step_index = 0;

    while (elapsed < t) {
        const double remaining = t - elapsed;
        const double wn = w.norm();
        const double scale = kRefine * singular_scale(geom.kind(), wn);
        double h = std::min({step, remaining, scale * scale});
        if (remaining - h < 1e-12 * t)
            h = remaining;
        if (!(h > 1e-14 * std::max(1.0, t)))
            throw StepFailure("simulate_direct: step refinement collapsed near a singular point; "
                              "reduce the step",
                              step_index, wn);

        const Quaternion dW = frame * gaussian_increment(rng, std::sqrt(h));
        const Quaternion delta = coef * dW + (drift_sign * coef * h) * w;
        const Quaternion next = w + delta;
        const double wd = dot4(w, delta);
        const double d2 = delta.norm2();
        const double next_coef = coef + sign * (2.0 * wd + d2);

        const double next2 = next.norm2();
        if (!std::isfinite(next2) || !(next_coef > 0.0))
            throw StepFailure("simulate_direct: ambient process left the chart; reduce the step",
                              step_index, wn);

        const Quaternion mid = 0.5 * (w + next);
        const double m2 = mid.norm2();
        if (!(m2 > 1e-24 * std::max(w.norm2(), next2)))
            throw StepFailure("simulate_direct: path through origin", step_index, wn);
        // 1/sin^2 r = (1+|w|^2)/|w|^2 on HP1, 1/sinh^2 r = (1-|w|^2)/|w|^2 on HH1.
        const double weight = (coef + sign * (wd + 0.25 * d2)) / m2;
        const WindingVector inc = weight * imag_part(mid.conj() * dW);

        for (int k = 0; k < 3; ++k) {
            double& s = k == 0 ? zeta.v1 : (k == 1 ? zeta.v2 : zeta.v3);
            double& c = k == 0 ? comp.v1 : (k == 1 ? comp.v2 : comp.v3);
            const double v = inc[k];
            const double sum = s + v;
            c += std::abs(s) >= std::abs(v) ? (s - sum) + v : (v - sum) + s;
            s = sum;
        }

        w = next;
        coef = next_coef;
        elapsed += h;
        ++step_index;
    }
    return {zeta + comp, std::nullopt, t};
}

WindingSample flat_direct(const Geometry& geom, double t, double step, RngStream& rng,
                          const Quaternion& frame)
{
    const auto grid = make_grid(StepPolicy::uniform(step), t);
    Quaternion w = frame * geom.ambient_start();
    WindingAccumulator acc;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double h = grid[i] - grid[i - 1];
        const Quaternion next = w + frame * gaussian_increment(rng, std::sqrt(h));
        try {
            acc.add_step(w, next);
        } catch (const DomainError& e) {
            throw StepFailure(e.what(), i, w.norm());
        }
        w = next;
    }
    return {acc.value(), std::nullopt, t};
}

}  // namespace

WindingSample direct_path(const Geometry& geom, double t, double step, std::uint64_t master_seed,
                          std::uint64_t path_index, const Quaternion& frame)
{
    if (!(t > 0.0) || !(step > 0.0))
        throw DomainError("simulate_direct: t and step must be positive");
    RngStream rng(master_seed, path_index, Substream::ambient);
    if (geom.kind() == GeometryKind::flat_H)
        return flat_direct(geom, t, step, rng, frame);
    return curved_direct(geom, t, step, rng, frame);
}

std::vector<WindingSample> simulate_timechange(const Geometry& geom, double t, std::size_t n_paths,
                                               const SimOptions& opts)
{
    if (!(t > 0.0))
        throw DomainError("simulate_timechange: t must be positive");
    const auto grid = make_grid(opts.policy, t);
    std::vector<WindingSample> out(n_paths);
    parallel_for(n_paths, opts.workers,
                 [&](std::size_t i) { out[i] = timechange_path(geom, grid, opts.master_seed, i); });
    return out;
}

std::vector<WindingSample> simulate_direct(const Geometry& geom, double t, double step,
                                           std::size_t n_paths, const SimOptions& opts,
                                           const Quaternion& frame)
{
    std::vector<WindingSample> out(n_paths);
    parallel_for(n_paths, opts.workers, [&](std::size_t i) {
        out[i] = direct_path(geom, t, step, opts.master_seed, i, frame);
    });
    return out;
}

}  // namespace qwind
