#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwind/quaternion.hpp"
#include "qwind/radial.hpp"

namespace qwind {

enum class GeometryKind
{
    flat_H,
    projective_HP1,
    hyperbolic_HH1,
};

std::string_view to_string(GeometryKind kind);
/// Accepts "flat", "hp1", "hh1" (and the enum spellings).
GeometryKind parse_geometry(std::string_view name);

class Geometry
{
  public:
    /// Flat: start radius is |W_0|. Curved: geodesic distance r(0) from the
    /// origin, with r(0) < pi/2 on HP1.
    Geometry(GeometryKind kind, double start_radius);

    GeometryKind kind() const { return kind_; }
    double start_radius() const { return start_radius_; }

    /// Radial diffusion driving the skew product.
    RadialSpec radial_spec() const;
    ClockKind clock_kind() const;
    /// Starting point of the ambient process in its chart, on the real axis.
    Quaternion ambient_start() const;

  private:
    GeometryKind kind_;
    double start_radius_;
};

struct WindingSample
{
    WindingVector zeta;
    std::optional<double> clock;  // time-change route only
    double horizon = 0.0;
};

struct SimOptions
{
    std::uint64_t master_seed = 0;
    int workers = 1;
    StepPolicy policy{};
};

/// Skew-product route: radial process plus clock A_t, then zeta = sqrt(A_t) g
/// with g a standard 3-d Gaussian.
std::vector<WindingSample> simulate_timechange(const Geometry& geom, double t, std::size_t n_paths,
                                               const SimOptions& opts);

/// Ambient route: integrate the chart SDE and accumulate the discrete
/// Stratonovich winding integral. `frame` left-multiplies the start point and
/// every driving increment (pathwise invariance checks).
std::vector<WindingSample> simulate_direct(const Geometry& geom, double t, double step,
                                           std::size_t n_paths, const SimOptions& opts,
                                           const Quaternion& frame = Quaternion::identity());

/// Single-path variants; `path_index` selects the RNG streams.
WindingSample timechange_path(const Geometry& geom, std::span<const double> grid,
                              std::uint64_t master_seed, std::uint64_t path_index);
WindingSample direct_path(const Geometry& geom, double t, double step, std::uint64_t master_seed,
                          std::uint64_t path_index, const Quaternion& frame = Quaternion::identity());

}  // namespace qwind
