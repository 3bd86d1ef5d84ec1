#pragma once

#include <cmath>

#include <Eigen/Core>

#include "hcmean/censoring.hpp"
#include "hcmean/error.hpp"

namespace hcmean {

/// Above this size the running product is accumulated as a sum of logs.
inline constexpr Eigen::Index kLogSpaceThreshold = 10000;

/// Kaplan-Meier product-limit estimate on a censored sample.
///
/// weights[i-1] = W_{i,n} = delta_i/(n-i+1) * prod_{j<i} ((n-j)/(n-j+1))^{delta_j}
/// survival_at_jump[i-1] = prod_{j<=i} ((n-j)/(n-j+1))^{delta_j}
template <typename Scalar = double>
struct KMCurve {
    ArrayX<Scalar> jump_points;
    ArrayX<Scalar> weights;
    ArrayX<Scalar> survival_at_jump;

    /// F_n(x); equals 1 at and beyond the largest observation.
    [[nodiscard]] Scalar cdf(Scalar x) const {
        const Eigen::Index n = jump_points.size();
        if (x >= jump_points[n - 1]) return Scalar(1);
        Scalar total(0);
        for (Eigen::Index i = 0; i < n && jump_points[i] <= x; ++i) total += weights[i];
        return total;
    }
};

template <typename Scalar>
[[nodiscard]] KMCurve<Scalar> km_curve(const CensoredSample<Scalar>& s) {
    using std::exp;
    using std::log1p;
    const Eigen::Index n = s.size();
    KMCurve<Scalar> curve{s.z(), ArrayX<Scalar>(n), ArrayX<Scalar>(n)};
    const bool log_space = n > kLogSpaceThreshold;
    Scalar product(1);
    Scalar log_product(0);
    for (Eigen::Index i = 1; i <= n; ++i) {
        const Scalar at_risk = static_cast<Scalar>(n - i + 1);
        const bool event = s.flag(i);
        curve.weights[i - 1] = event ? product / at_risk : Scalar(0);
        if (event) {
            if (log_space) {
                log_product += log1p(-Scalar(1) / at_risk);
                product = exp(log_product);
            } else {
                product *= static_cast<Scalar>(n - i) / at_risk;
            }
        }
        curve.survival_at_jump[i - 1] = product;
    }
    return curve;
}

template <typename Scalar>
[[nodiscard]] ArrayX<Scalar> km_weights(const CensoredSample<Scalar>& s) {
    return km_curve(s).weights;
}

/// prod_{j=1}^{m} ((n-j)/(n-j+1))^{delta_j}, the KM survival just after Z_{m:n}.
template <typename Scalar>
[[nodiscard]] Scalar km_survival_product(const CensoredSample<Scalar>& s, Eigen::Index m) {
    using std::exp;
    using std::log1p;
    const Eigen::Index n = s.size();
    if (m < 1 || m > n - 1) throw DomainError("km_survival_product: m must lie in [1, n-1]");
    if (n > kLogSpaceThreshold) {
        Scalar log_product(0);
        for (Eigen::Index j = 1; j <= m; ++j)
            if (s.flag(j)) log_product += log1p(-Scalar(1) / static_cast<Scalar>(n - j + 1));
        return exp(log_product);
    }
    Scalar product(1);
    for (Eigen::Index j = 1; j <= m; ++j)
        if (s.flag(j)) product *= static_cast<Scalar>(n - j) / static_cast<Scalar>(n - j + 1);
    return product;
}

/// KM integral of x, sum_i W_{i,n} Z_{i:n}. Zero when every observation is censored.
template <typename Scalar>
[[nodiscard]] Scalar km_mean(const CensoredSample<Scalar>& s) {
    return (km_weights(s) * s.z()).sum();
}

}  // namespace hcmean
