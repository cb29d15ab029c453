#include "qwind/estimators.hpp"

#include <cmath>
#include <vector>

#include "qwind/errors.hpp"
#include "qwind/stats.hpp"

namespace qwind {

CfEstimate empirical_cf(std::span<const WindingSample> samples, const WindingVector& lambda)
{
    if (samples.empty())
        throw DomainError("empirical_cf: empty sample set");
    std::vector<double> re(samples.size());
    std::vector<double> im(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double phase = lambda.dot(samples[i].zeta);
        re[i] = std::cos(phase);
        im[i] = std::sin(phase);
    }
    const MeanStats r = mean_and_stderr(re);
    const MeanStats s = mean_and_stderr(im);
    return {lambda, {r.mean, s.mean}, r.stderr, s.stderr};
}

CfEstimate rao_blackwell_cf_scaled(std::span<const WindingSample> samples, const WindingVector& lambda,
                                   double scale)
{
    if (samples.empty())
        throw DomainError("rao_blackwell_cf: empty sample set");
    if (!(scale > 0.0))
        throw DomainError("rao_blackwell_cf: scale must be positive");
    const double k = -0.5 * lambda.norm2() / (scale * scale);
    std::vector<double> v(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!samples[i].clock)
            throw DomainError("rao_blackwell_cf: sample " + std::to_string(i) +
                              " has no clock (direct-route samples cannot be Rao-Blackwellized)");
        v[i] = std::exp(k * *samples[i].clock);
    }
    const MeanStats m = mean_and_stderr(v);
    return {lambda, {m.mean, 0.0}, m.stderr, 0.0};
}

CfEstimate rao_blackwell_cf(std::span<const WindingSample> samples, const WindingVector& lambda)
{
    return rao_blackwell_cf_scaled(samples, lambda, 1.0);
}

}  // namespace qwind
