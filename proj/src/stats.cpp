#include "qwind/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwind/errors.hpp"

namespace qwind {

double compensated_sum(std::span<const double> xs)
{
    double sum = 0.0;
    double comp = 0.0;
    for (const double v : xs) {
        const double s = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - s) + v;
        else
            comp += (v - s) + sum;
        sum = s;
    }
    return sum + comp;
}

MeanStats mean_and_stderr(std::span<const double> xs)
{
    if (xs.empty())
        throw DomainError("mean_and_stderr: empty input");
    const double n = static_cast<double>(xs.size());
    const double mean = compensated_sum(xs) / n;
    if (xs.size() < 2)
        return {mean, 0.0, xs.size()};
    std::vector<double> dev2(xs.size());
    std::transform(xs.begin(), xs.end(), dev2.begin(), [mean](double v) {
        const double d = v - mean;
        return d * d;
    });
    const double var = compensated_sum(dev2) / (n - 1.0);
    return {mean, std::sqrt(var / n), xs.size()};
}

double ks_critical_1pct(std::size_t n, std::size_t m)
{
    // c(alpha) = sqrt(-ln(alpha / 2) / 2)
    const double c = std::sqrt(-0.5 * std::log(0.005));
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw DomainError("ks_two_sample: both samples must be nonempty");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v)
            ++i;
        while (j < y.size() && y[j] == v)
            ++j;
        d = std::max(d, std::abs(i / nx - j / ny));
    }
    KsResult res;
    res.statistic = d;
    res.critical = ks_critical_1pct(x.size(), y.size());
    res.pass = d <= res.critical;
    return res;
}

}  // namespace qwind
