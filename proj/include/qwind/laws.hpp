#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qwind/quaternion.hpp"
#include "qwind/radial.hpp"

namespace qwind {

/// E[exp(i lambda . zeta)] at one frequency.
struct CfEstimate
{
    WindingVector lambda;
    std::complex<double> value{1.0, 0.0};
    double stderr = 0.0;     // standard error of the real part (0 for closed forms)
    double stderr_im = 0.0;  // standard error of the imaginary part
};

/// Monte Carlo controls shared by the Girsanov estimators.
struct McOptions
{
    std::size_t n_paths = 100000;
    std::uint64_t master_seed = 0;
    int workers = 1;
    StepPolicy policy{};
};

/// sqrt(1 + |lambda|^2) - 1: the Girsanov tilt shared by all three geometries.
double girsanov_tilt(const WindingVector& lambda);

// -- flat ------------------------------------------------------------------

/// exp(-rho^2/2t)/(t rho) * int_0^inf I_{sqrt(1+|lambda|^2)}(r rho/t) exp(-r^2/2t) r^2 dr
CfEstimate cf_flat_exact(const WindingVector& lambda, double t, double rho);

/// rho^mu E[R(t)^-mu] under the tilted measure, where R is a Bessel process
/// of dimension 2 mu + 4 started at rho (exact endpoint sampling).
CfEstimate cf_flat_girsanov(const WindingVector& lambda, double t, double rho, const McOptions& mc);

/// Dimension of the tilted Bessel process for a given tilt mu.
double flat_tilted_dimension(double mu);

// -- HP1 -------------------------------------------------------------------

/// (sin 2r0)^mu e^{-2(|lambda|^2+mu)t} E[(sin 2r(t))^-mu] with r the Jacobi
/// diffusion of drift (2 mu + 3) cot 2r.
CfEstimate cf_hp1_identity(const WindingVector& lambda, double t, double r0, const McOptions& mc);

// -- HH1 -------------------------------------------------------------------

/// tanh(r0)^nu (1 + nu / (2 cosh^2 r0)), nu = sqrt(|lambda|^2+1) - 1.
CfEstimate cf_hh1_limit(const WindingVector& lambda, double r0);

/// e^{-4t} tanh(r0)^nu cosh(r0)^-2 E[tanh(r(t))^-nu cosh^2 r(t)] under the
/// hyperbolic Jacobi diffusion with drift (3/2+nu) coth r - (1/2+nu) tanh r.
/// With `control_variate`, E[cosh^2 r(t)] is taken from cosh2_moment and
/// only the bounded remainder cosh^2 r (tanh^-nu r - 1) is averaged.
CfEstimate cf_hh1_identity(const WindingVector& lambda, double t, double r0, const McOptions& mc,
                           bool control_variate = true);

/// E[cosh^2 r(t)] for dr = (alpha coth r + beta tanh r) dt + dW, r(0) = r0.
double cosh2_moment(double alpha, double beta, double r0, double t);

// -- densities -------------------------------------------------------------

/// y e^y / (2 pi^2) K_2(sqrt(|x|^2+y^2)) / (|x|^2+y^2)
double relativistic_cauchy_density(const WindingVector& x, double y);
double relativistic_cauchy_density_radial(double rho, double y);

struct LimitDensityTerms
{
    double cauchy;      // relativistic-Cauchy-type term at y(r0) = -ln tanh r0
    double derivative;  // (tanh r0 / 2) d/du of the same expression at u = r0
    double total() const { return cauchy + derivative; }
};

LimitDensityTerms hh1_limit_density_terms(double rho, double r0);

/// Density of the HH1 limit winding at x in R^3.
double hh1_limit_density(const WindingVector& x, double r0);
double hh1_limit_density_radial(double rho, double r0);

/// Radial function sampled on increasing radii.
struct DensityGrid
{
    std::vector<double> radii;
    std::vector<double> values;
    double start_radius = 0.0;
};

/// Grid for hh1_limit_density on [0, rmax]. Radii are y sinh(s) for uniform s
/// (y = -ln tanh r0), which resolves the peak of width ~y at the origin.
DensityGrid hh1_limit_density_grid(double r0, double rmax, std::size_t points);

/// 4 pi int f(rho) sinc(|lambda| rho) rho^2 d rho on the grid (composite
/// Simpson on nonuniform panels).
double radial_cf(const DensityGrid& density, double lambda_norm);

/// Same transform for a radial density given as a function, by adaptive
/// quadrature on [0, inf).
double radial_cf(const std::function<double(double)>& density, double lambda_norm,
                 double rel_tol = 1e-11);

}  // namespace qwind
