#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace qwind {

/// Real quaternion t + xI + yJ + zK with the Hamilton product (IJ = K).
struct Quaternion
{
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static constexpr Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }

    constexpr double norm2() const { return t * t + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    constexpr Quaternion conj() const { return {t, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& o)
    {
        t += o.t;
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o)
    {
        t -= o.t;
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s)
    {
        t *= s;
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
    friend constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
    friend constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
    friend constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

    friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b)
    {
        return {a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z,
                a.t * b.x + a.x * b.t + a.y * b.z - a.z * b.y,
                a.t * b.y - a.x * b.z + a.y * b.t + a.z * b.x,
                a.t * b.z + a.x * b.y - a.y * b.x + a.z * b.t};
    }

    friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Coordinates of an su(2) element in the (I, J, K) basis.
struct WindingVector
{
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;

    constexpr double norm2() const { return v1 * v1 + v2 * v2 + v3 * v3; }
    double norm() const { return std::sqrt(norm2()); }
    constexpr double dot(const WindingVector& o) const { return v1 * o.v1 + v2 * o.v2 + v3 * o.v3; }
    constexpr double operator[](int i) const { return i == 0 ? v1 : (i == 1 ? v2 : v3); }

    constexpr WindingVector& operator+=(const WindingVector& o)
    {
        v1 += o.v1;
        v2 += o.v2;
        v3 += o.v3;
        return *this;
    }
    friend constexpr WindingVector operator+(WindingVector a, const WindingVector& b) { return a += b; }
    friend constexpr WindingVector operator-(const WindingVector& a, const WindingVector& b)
    {
        return {a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3};
    }
    friend constexpr WindingVector operator*(double s, const WindingVector& a)
    {
        return {s * a.v1, s * a.v2, s * a.v3};
    }
    friend constexpr bool operator==(const WindingVector&, const WindingVector&) = default;
};

constexpr WindingVector imag_part(const Quaternion& q) { return {q.x, q.y, q.z}; }
constexpr Quaternion pure(const WindingVector& v) { return {0.0, v.v1, v.v2, v.v3}; }

struct PolarForm
{
    double radius;
    Quaternion theta;  // unit quaternion
};

/// q = radius * theta with radius = |q|. Throws DomainError for q = 0.
PolarForm polar_decompose(const Quaternion& q);

/// Winding one-form at q evaluated on the tangent vector dq, from the three
/// real-coordinate component formulas.
WindingVector winding_form(const Quaternion& q, const Quaternion& dq);

/// Same form computed as Im(conj(q) dq) / |q|^2 through quaternion products.
WindingVector winding_form_quaternionic(const Quaternion& q, const Quaternion& dq);

/// Adjoint action u v u^{-1} of a unit quaternion on su(2).
WindingVector adjoint(const Quaternion& u, const WindingVector& v);

/// Time-stamped discrete path in H \ {0}.
class SampledPath
{
  public:
    /// Validates strictly increasing times and nonzero points.
    SampledPath(std::vector<double> times, std::vector<Quaternion> points);

    std::span<const double> times() const { return times_; }
    std::span<const Quaternion> points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    SampledPath left_multiplied(const Quaternion& u) const;
    SampledPath right_multiplied(const Quaternion& u) const;

  private:
    std::vector<double> times_;
    std::vector<Quaternion> points_;
};

/// Accumulates the midpoint-rule (discrete Stratonovich) winding integral
/// step by step, so callers can integrate without storing the path.
class WindingAccumulator
{
  public:
    /// Adds winding_form(midpoint, next - prev). Throws DomainError when the
    /// midpoint is degenerate ("path through origin").
    void add_step(const Quaternion& prev, const Quaternion& next);

    WindingVector value() const { return sum_ + comp_; }

  private:
    WindingVector sum_{};
    WindingVector comp_{};  // Neumaier compensation
};

/// Discrete Stratonovich line integral of the winding form along the path.
WindingVector stratonovich_winding(const SampledPath& path);

}  // namespace qwind
