#include "hcmean/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hcmean::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("normal_quantile: u must lie in (0,1)");
    // Acklam's rational approximation, then one Halley step on erfc.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double low = 0.02425;
    double x;
    if (u < low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - low) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Phi(x) - u, from the upper tail when u > 1/2 so that 1 - u stays exact
    const double e = u > 0.5 ? (1.0 - u) - 0.5 * std::erfc(x / std::numbers::sqrt2) : normal_cdf(x) - u;
    const double step = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - step / (1.0 + 0.5 * x * step);
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double total = 0.0;
        for (double v : values) total += v;
        return total;
    }
    const auto half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of empty data");
    return pairwise_sum(values) / static_cast<double>(values.size());
}

namespace {

double central_moment(std::span<const double> values, double center, int order) {
    std::vector<double> terms(values.size());
    std::transform(values.begin(), values.end(), terms.begin(),
                   [&](double v) { return std::pow(v - center, order); });
    return pairwise_sum(terms) / static_cast<double>(values.size());
}

}  // namespace

double variance(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("variance needs at least 2 values");
    const double m = mean(values);
    return central_moment(values, m, 2) * static_cast<double>(values.size()) /
           static_cast<double>(values.size() - 1);
}

double skewness(std::span<const double> values) {
    if (values.size() < 3) throw std::invalid_argument("skewness needs at least 3 values");
    const double m = mean(values);
    const double m2 = central_moment(values, m, 2);
    return central_moment(values, m, 3) / std::pow(m2, 1.5);
}

double excess_kurtosis(std::span<const double> values) {
    if (values.size() < 4) throw std::invalid_argument("kurtosis needs at least 4 values");
    const double m = mean(values);
    const double m2 = central_moment(values, m, 2);
    return central_moment(values, m, 4) / (m2 * m2) - 3.0;
}

double sample_quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw std::invalid_argument("quantile of empty data");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

NormalityTest anderson_darling_normal(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 8) throw std::invalid_argument("Anderson-Darling test needs at least 8 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double m = mean(sorted);
    const double sd = std::sqrt(variance(sorted));
    if (!(sd > 0.0)) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0};

    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double zi = (sorted[i] - m) / sd;
        const double zj = (sorted[n - 1 - i] - m) / sd;
        // log Phi(zi) + log(1 - Phi(zj)) via erfc for tail accuracy
        const double log_cdf = std::log(0.5 * std::erfc(-zi / std::numbers::sqrt2));
        const double log_sf = std::log(0.5 * std::erfc(zj / std::numbers::sqrt2));
        terms[i] = (2.0 * static_cast<double>(i) + 1.0) * (log_cdf + log_sf);
    }
    const double nn = static_cast<double>(n);
    const double a2 = -nn - pairwise_sum(terms) / nn;
    const double adj = a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));

    // D'Agostino & Stephens (1986), Table 4.9 p-value approximations.
    double p;
    if (adj >= 0.6)
        p = std::exp(1.2937 - 5.709 * adj + 0.0186 * adj * adj);
    else if (adj >= 0.34)
        p = std::exp(0.9177 - 4.279 * adj - 1.38 * adj * adj);
    else if (adj >= 0.2)
        p = 1.0 - std::exp(-8.318 + 42.796 * adj - 59.938 * adj * adj);
    else
        p = 1.0 - std::exp(-13.436 + 101.14 * adj - 223.73 * adj * adj);
    return {a2, adj, std::clamp(p, 0.0, 1.0)};
}

}  // namespace hcmean::stats
