#pragma once

#include <cstddef>
#include <span>

namespace qwind {

/// Neumaier-compensated sum, accumulated in index order.
double compensated_sum(std::span<const double> xs);

struct MeanStats
{
    double mean = 0.0;
    double stderr = 0.0;  // sample standard deviation / sqrt(n); 0 when n < 2
    std::size_t n = 0;
};

/// Two-pass mean and standard error with compensated sums.
MeanStats mean_and_stderr(std::span<const double> xs);

struct KsResult
{
    double statistic = 0.0;
    double critical = 0.0;  // asymptotic 1% critical value
    bool pass = true;
};

/// Two-sample Kolmogorov-Smirnov test at the 1% level.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic 1% critical value c(0.01) * sqrt((n + m) / (n m)).
double ks_critical_1pct(std::size_t n, std::size_t m);

}  // namespace qwind
