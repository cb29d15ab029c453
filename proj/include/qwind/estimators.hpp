#pragma once

#include <span>

#include "qwind/laws.hpp"
#include "qwind/winding_sim.hpp"

namespace qwind {

/// mean of exp(i lambda . zeta), with separate standard errors for the real
/// and imaginary parts.
CfEstimate empirical_cf(std::span<const WindingSample> samples, const WindingVector& lambda);

/// mean of exp(-|lambda|^2 A_t / 2). Every sample must carry its clock.
CfEstimate rao_blackwell_cf(std::span<const WindingSample> samples, const WindingVector& lambda);

/// Same as rao_blackwell_cf for the rescaled winding zeta / scale.
CfEstimate rao_blackwell_cf_scaled(std::span<const WindingSample> samples, const WindingVector& lambda,
                                   double scale);

}  // namespace qwind
