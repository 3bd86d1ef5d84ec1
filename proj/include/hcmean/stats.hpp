#pragma once

#include <span>
#include <vector>

namespace hcmean::stats {

[[nodiscard]] double normal_cdf(double x);

/// Inverse standard normal cdf, accurate to a few ulps on (0,1).
[[nodiscard]] double normal_quantile(double u);

/// Pairwise summation, so results do not depend on accumulation order of chunks.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

[[nodiscard]] double mean(std::span<const double> values);
/// Sample variance with divisor n-1.
[[nodiscard]] double variance(std::span<const double> values);
[[nodiscard]] double skewness(std::span<const double> values);
/// Excess kurtosis (normal = 0), moment estimator.
[[nodiscard]] double excess_kurtosis(std::span<const double> values);

/// Linear-interpolation sample quantile (Hyndman-Fan type 7).
[[nodiscard]] double sample_quantile(std::vector<double> values, double prob);

struct NormalityTest {
    double statistic;           ///< A^2 against the normal with fitted mean and sd
    double adjusted_statistic;  ///< A^2 (1 + 0.75/n + 2.25/n^2)
    double p_value;
};

/// Anderson-Darling test of composite normality (mean and variance estimated).
[[nodiscard]] NormalityTest anderson_darling_normal(std::span<const double> values);

}  // namespace hcmean::stats
