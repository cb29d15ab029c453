#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qwind/rng.hpp"

namespace qwind {

enum class RadialKind
{
    bessel,       // drift (delta - 1) / (2 r) on (0, inf)
    jacobi_trig,  // drift c cot(2r) on (0, pi/2)
    jacobi_hyp,   // drift alpha coth(r) + beta tanh(r) on (0, inf)
};

enum class ClockKind
{
    none,
    inv_r_squared,         // 1 / r^2
    four_over_sin_sq_2r,   // 4 / sin^2(2r)
    four_over_sinh_sq_2r,  // 4 / sinh^2(2r)
};

/// Weight of the clock functional at r.
double clock_weight(ClockKind kind, double r);

/// One-dimensional radial diffusion dr = b(r) dt + dW. Construction rejects
/// parameter sets whose drift does not repel every attainable boundary.
class RadialSpec
{
  public:
    static RadialSpec bessel(double dimension, double r0);
    static RadialSpec jacobi_trig(double c, double r0);
    static RadialSpec jacobi_hyp(double alpha, double beta, double r0);

    RadialKind kind() const { return kind_; }
    double r0() const { return r0_; }
    double p0() const { return p0_; }
    double p1() const { return p1_; }

    double drift(double r) const;
    /// Derivative of the drift.
    double drift_slope(double r) const;
    /// Supremum of drift_slope over the domain (bounds the implicit step).
    double max_slope() const;
    double upper_bound() const;  // pi/2 for jacobi_trig, +inf otherwise
    bool inside(double r) const { return r > 0.0 && r < upper_bound(); }

  private:
    RadialSpec(RadialKind kind, double p0, double p1, double r0);

    RadialKind kind_;
    double p0_;  // delta, c or alpha
    double p1_;  // beta (jacobi_hyp only)
    double r0_;
};

/// Time discretization. Uniform step h, or geometric cells after an initial
/// uniform segment for long horizons: cells [s, ratio*s] with `substeps`
/// equal substeps each, starting at `geometric_start`.
struct StepPolicy
{
    enum class Kind
    {
        uniform,
        geometric
    };
    Kind kind = Kind::uniform;
    double step = 1e-3;
    double geometric_start = 1.0;
    double ratio = 2.0;
    int substeps = 1000;

    static StepPolicy uniform(double h) { return {Kind::uniform, h}; }
    static StepPolicy geometric(double h, double start, double ratio, int substeps)
    {
        return {Kind::geometric, h, start, ratio, substeps};
    }
};

/// Grid 0 = t_0 < t_1 < ... < t_n = t.
std::vector<double> make_grid(const StepPolicy& policy, double t);

struct RadialPath
{
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> clock;  // clock[0] = 0, nondecreasing
};

struct RadialEndpoint
{
    double r = 0.0;
    double clock = 0.0;
};

/// Norm of a 4-d Gaussian walk started at (r0,0,0,0), sampled on the grid:
/// exact in law for the dimension-4 Bessel process at every grid time. Clock is
/// the trapezoid rule on 1/R^2.
RadialPath simulate_bessel4_exact(double r0, std::span<const double> grid, RngStream& stream);
RadialEndpoint bessel4_exact_endpoint(double r0, std::span<const double> grid, RngStream& stream);

/// Exact draw of R(t) for a Bessel process of real dimension delta >= 1:
/// R(t)^2 = (r0 + sqrt(t) Z)^2 + t * chi^2_{delta-1}.
double sample_bessel_endpoint(double dimension, double r0, double t, RngStream& stream);

/// Drift-implicit Euler-Maruyama, r_{n+1} = r_n + h b(r_{n+1}) + dW_n, with
/// the clock accumulated by the trapezoid rule. The implicit equation is
/// solved by Newton iteration safeguarded by a bracket against the domain
/// boundary (tolerance 1e-12, at most 200 iterations).
RadialPath simulate_radial_implicit(const RadialSpec& spec, std::span<const double> grid,
                                    ClockKind clock, RngStream& stream);
RadialEndpoint radial_implicit_endpoint(const RadialSpec& spec, std::span<const double> grid,
                                        ClockKind clock, RngStream& stream);

/// Convenience overload building the grid from a policy.
RadialPath simulate_radial_implicit(const RadialSpec& spec, double t, const StepPolicy& policy,
                                    ClockKind clock, RngStream& stream);

/// One implicit step from r with step h and Brownian increment dw. Throws
/// StepFailure on nonconvergence.
double implicit_step(const RadialSpec& spec, double r, double h, double dw, std::size_t step_index);

}  // namespace qwind
