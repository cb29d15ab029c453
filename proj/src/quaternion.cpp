#include "qwind/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qwind/errors.hpp"

namespace qwind {

namespace {

void neumaier_add(double& sum, double& comp, double v)
{
    const double s = sum + v;
    if (std::abs(sum) >= std::abs(v))
        comp += (sum - s) + v;
    else
        comp += (v - s) + sum;
    sum = s;
}

}  // namespace

PolarForm polar_decompose(const Quaternion& q)
{
    const double r = q.norm();
    if (!(r > 0.0))
        throw DomainError("polar_decompose: zero quaternion");
    return {r, q * (1.0 / r)};
}

WindingVector winding_form(const Quaternion& q, const Quaternion& dq)
{
    const double n2 = q.norm2();
    if (!(n2 > 0.0))
        throw DomainError("winding_form: base point is the origin");
    const auto [t, x, y, z] = q;
    const auto [dt, dx, dy, dz] = dq;
    return {(t * dx - x * dt + z * dy - y * dz) / n2,
            (t * dy - y * dt + x * dz - z * dx) / n2,
            (t * dz - z * dt + y * dx - x * dy) / n2};
}

WindingVector winding_form_quaternionic(const Quaternion& q, const Quaternion& dq)
{
    const double n2 = q.norm2();
    if (!(n2 > 0.0))
        throw DomainError("winding_form: base point is the origin");
    return (1.0 / n2) * imag_part(q.conj() * dq);
}

WindingVector adjoint(const Quaternion& u, const WindingVector& v)
{
    return imag_part(u * pure(v) * u.conj());
}

SampledPath::SampledPath(std::vector<double> times, std::vector<Quaternion> points)
    : times_(std::move(times)), points_(std::move(points))
{
    if (times_.size() != points_.size())
        throw DomainError("SampledPath: times and points differ in length");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw DomainError("SampledPath: times must be strictly increasing");
    for (const auto& p : points_)
        if (!(p.norm2() > 0.0))
            throw DomainError("SampledPath: path point at the origin");
}

SampledPath SampledPath::left_multiplied(const Quaternion& u) const
{
    std::vector<Quaternion> pts(points_.size());
    std::transform(points_.begin(), points_.end(), pts.begin(),
                   [&](const Quaternion& p) { return u * p; });
    return {times_, std::move(pts)};
}

SampledPath SampledPath::right_multiplied(const Quaternion& u) const
{
    std::vector<Quaternion> pts(points_.size());
    std::transform(points_.begin(), points_.end(), pts.begin(),
                   [&](const Quaternion& p) { return p * u; });
    return {times_, std::move(pts)};
}

void WindingAccumulator::add_step(const Quaternion& prev, const Quaternion& next)
{
    const Quaternion mid = 0.5 * (prev + next);
    const double scale = std::max(prev.norm(), next.norm());
    if (!(mid.norm() >= 1e-12 * scale) || !(scale > 0.0))
        throw DomainError("stratonovich_winding: path through origin");
    const WindingVector inc = winding_form(mid, next - prev);
    neumaier_add(sum_.v1, comp_.v1, inc.v1);
    neumaier_add(sum_.v2, comp_.v2, inc.v2);
    neumaier_add(sum_.v3, comp_.v3, inc.v3);
}

WindingVector stratonovich_winding(const SampledPath& path)
{
    const auto pts = path.points();
    if (pts.size() < 2)
        throw DomainError("stratonovich_winding: need at least 2 points, got " +
                          std::to_string(pts.size()));
    WindingAccumulator acc;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc.add_step(pts[i], pts[i + 1]);
    return acc.value();
}

}  // namespace qwind
