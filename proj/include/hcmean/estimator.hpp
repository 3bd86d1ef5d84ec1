#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Core>

#include "hcmean/censoring.hpp"
#include "hcmean/error.hpp"
#include "hcmean/survival.hpp"
#include "hcmean/tail.hpp"

namespace hcmean {

/// Tail-corrected mean estimate split into body and tail contributions.
template <typename Scalar = double>
struct MeanEstimate {
    Scalar mu1_hat;      ///< KM integral up to Z_{n-k:n}, including the boundary term
    Scalar mu2_hat;      ///< Karamata extrapolation beyond Z_{n-k:n}
    Scalar mu_hat;       ///< mu1_hat + mu2_hat
    TailEstimate<Scalar> tail;
    Scalar km_baseline;  ///< plain KM mean over the whole sample
    Scalar threshold;    ///< Z_{n-k:n}
    Scalar km_tail_survival;  ///< KM survival at Z_{n-k:n}

    /// Z_{n-k:n} * KM survival there; the scale in the asymptotic standardization.
    [[nodiscard]] Scalar tail_scale() const { return threshold * km_tail_survival; }
};

namespace detail {

template <typename Scalar>
void check_mu_k(const CensoredSample<Scalar>& s, Eigen::Index k) {
    if (k < 2 || k > s.size() - 2) throw DomainError("mean estimator: k must lie in [2, n-2]");
}

// Sum of W_{i,n} Z_{i:n} over i <= m, and the product term up to m, from one pass.
template <typename Scalar>
std::pair<Scalar, Scalar> km_body(const CensoredSample<Scalar>& s, Eigen::Index m) {
    const KMCurve<Scalar> curve = km_curve(s);
    const Scalar body = (curve.weights.head(m) * s.z().head(m)).sum();
    return {body, curve.survival_at_jump[m - 1]};
}

template <typename Scalar>
Scalar karamata_factor(Scalar gamma1) {
    if (std::isnan(static_cast<double>(gamma1)))
        throw EstimatorUndefined(EstimatorUndefined::Reason::AllCensoredTail,
                                 "mu2_hat: every top-k observation is censored");
    if (!(gamma1 < Scalar(1)))
        throw EstimatorUndefined(EstimatorUndefined::Reason::InfiniteMeanEstimate,
                                 "mu2_hat: estimated tail index is >= 1");
    return gamma1 / (Scalar(1) - gamma1);
}

}  // namespace detail

template <typename Scalar>
[[nodiscard]] Scalar mu1_hat(const CensoredSample<Scalar>& s, Eigen::Index k) {
    detail::check_mu_k(s, k);
    const Eigen::Index m = s.size() - k;
    const auto [body, tail_survival] = detail::km_body(s, m);
    return tail_survival * s.order_stat(m) + body;
}

template <typename Scalar>
[[nodiscard]] Scalar mu2_hat(const CensoredSample<Scalar>& s, Eigen::Index k) {
    detail::check_mu_k(s, k);
    const Eigen::Index m = s.size() - k;
    const Scalar factor = detail::karamata_factor(tail_estimate(s, k).gamma1_hat);
    return factor * s.order_stat(m) * km_survival_product(s, m);
}

/// Full estimate at a fixed k.
template <typename Scalar>
[[nodiscard]] MeanEstimate<Scalar> mu_hat(const CensoredSample<Scalar>& s, Eigen::Index k) {
    detail::check_mu_k(s, k);
    const Eigen::Index m = s.size() - k;
    const KMCurve<Scalar> curve = km_curve(s);
    const auto tail = tail_estimate(s, k);
    const Scalar factor = detail::karamata_factor(tail.gamma1_hat);
    const Scalar threshold = s.order_stat(m);
    const Scalar tail_survival = curve.survival_at_jump[m - 1];
    const Scalar body = (curve.weights.head(m) * s.z().head(m)).sum();
    const Scalar mu1 = tail_survival * threshold + body;
    const Scalar mu2 = factor * threshold * tail_survival;
    const Scalar baseline = (curve.weights * s.z()).sum();
    return {mu1, mu2, mu1 + mu2, tail, baseline, threshold, tail_survival};
}

/// Estimate with k chosen by the stability criterion, or at a fixed k if given.
template <typename Scalar>
[[nodiscard]] MeanEstimate<Scalar> mu_hat(const CensoredSample<Scalar>& s, std::optional<Eigen::Index> k,
                                          const KSelection& selection = {}) {
    return mu_hat(s, k ? *k : select_k_star(s, selection));
}

/// Constants of the second-order tail condition that enter the asymptotic bias.
template <typename Scalar = double>
struct AsymptoticParams {
    Scalar lambda1;  ///< limit of sqrt(k) A1(h)
    Scalar tau1;     ///< second-order index of F, negative
    Scalar p;
    Scalar gamma1;
};

/// Asymptotic mean of sqrt(k)(mu_hat - mu) / (Z_{n-k:n} Fbar_n(Z_{n-k:n})):
///   lambda1 / ((1 - p tau1)(1 - gamma1)^2) + lambda1 / ((gamma1 + tau1 - 1)(1 - gamma1))
template <typename Scalar>
[[nodiscard]] Scalar asymptotic_mean_m(const AsymptoticParams<Scalar>& params) {
    if (!(params.tau1 < Scalar(0))) throw DomainError("asymptotic_mean_m: tau1 must be negative");
    const Scalar a = Scalar(1) - params.p * params.tau1;
    const Scalar b = params.gamma1 + params.tau1 - Scalar(1);
    const Scalar c = Scalar(1) - params.gamma1;
    if (a == Scalar(0) || b == Scalar(0) || c == Scalar(0))
        throw DomainError("asymptotic_mean_m: singular parameter combination");
    return params.lambda1 / (a * c * c) + params.lambda1 / (b * c);
}

}  // namespace hcmean
