#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hcmean/censoring.hpp"
#include "hcmean/error.hpp"

namespace hcmean {

template <typename Scalar = double>
struct TailEstimate {
    Eigen::Index k = 0;
    Scalar gamma_hill = Scalar(0);
    Scalar p_hat = Scalar(0);
    /// gamma_hill / p_hat; NaN when p_hat = 0.
    Scalar gamma1_hat = std::numeric_limits<Scalar>::quiet_NaN();
};

namespace detail {

template <typename Scalar>
void check_k(const CensoredSample<Scalar>& s, Eigen::Index k, const char* who) {
    if (k < 2 || k > s.size() - 1)
        throw DomainError(std::string(who) + ": k must lie in [2, n-1]");
}

}  // namespace detail

/// Hill estimator on the top k observations above Z_{n-k:n}.
template <typename Scalar>
[[nodiscard]] Scalar hill(const CensoredSample<Scalar>& s, Eigen::Index k) {
    using std::log;
    detail::check_k(s, k, "hill");
    const Eigen::Index n = s.size();
    const Scalar threshold = s.order_stat(n - k);
    if (!(threshold > Scalar(0))) throw DomainError("hill: threshold must be positive");
    const Scalar log_threshold = log(threshold);
    Scalar total(0);
    for (Eigen::Index i = 1; i <= k; ++i) total += log(s.order_stat(n - i + 1)) - log_threshold;
    return std::max(Scalar(0), total / static_cast<Scalar>(k));
}

/// Proportion of uncensored observations among the top k.
template <typename Scalar>
[[nodiscard]] Scalar p_hat(const CensoredSample<Scalar>& s, Eigen::Index k) {
    detail::check_k(s, k, "p_hat");
    const Eigen::Index n = s.size();
    return static_cast<Scalar>(s.delta().segment(n - k, k).count()) / static_cast<Scalar>(k);
}

/// Censoring-adapted Hill estimator of the tail index of X.
template <typename Scalar>
[[nodiscard]] Scalar gamma1_hat(const CensoredSample<Scalar>& s, Eigen::Index k) {
    const Scalar p = p_hat(s, k);
    if (p == Scalar(0))
        throw EstimatorUndefined(EstimatorUndefined::Reason::AllCensoredTail,
                                 "gamma1_hat: every top-k observation is censored");
    return hill(s, k) / p;
}

template <typename Scalar>
[[nodiscard]] TailEstimate<Scalar> tail_estimate(const CensoredSample<Scalar>& s, Eigen::Index k) {
    TailEstimate<Scalar> t{k, hill(s, k), p_hat(s, k), std::numeric_limits<Scalar>::quiet_NaN()};
    if (t.p_hat > Scalar(0)) t.gamma1_hat = t.gamma_hill / t.p_hat;
    return t;
}

/// Tail estimates for every k in [2, k_max], computed in one O(k_max) pass.
/// Entry k-2 holds the estimate at k.
template <typename Scalar>
[[nodiscard]] std::vector<TailEstimate<Scalar>> tail_path(const CensoredSample<Scalar>& s, Eigen::Index k_max) {
    using std::log;
    detail::check_k(s, k_max, "tail_path");
    const Eigen::Index n = s.size();
    std::vector<TailEstimate<Scalar>> path;
    path.reserve(static_cast<std::size_t>(k_max - 1));
    Scalar log_sum = log(s.order_stat(n));
    Eigen::Index events = s.flag(n) ? 1 : 0;
    for (Eigen::Index k = 2; k <= k_max; ++k) {
        log_sum += log(s.order_stat(n - k + 1));
        events += s.flag(n - k + 1) ? 1 : 0;
        const Scalar kk = static_cast<Scalar>(k);
        TailEstimate<Scalar> t;
        t.k = k;
        t.gamma_hill = std::max(Scalar(0), log_sum / kk - log(s.order_stat(n - k)));
        t.p_hat = static_cast<Scalar>(events) / kk;
        if (events > 0) t.gamma1_hat = t.gamma_hill / t.p_hat;
        path.push_back(t);
    }
    return path;
}

/// Controls for the stability-based choice of k.
///
/// The lower bound defaults to 2.5% of n: at k = 2 the criterion is a single
/// term equal to its own median, so it is identically zero there and an
/// unbounded search collapses onto the smallest k.
struct KSelection {
    double theta = 0.3;
    Eigen::Index k_min = 2;
    double k_min_frac = 0.025;
    double k_max_frac = 0.25;

    /// [k_min, k_max] for a sample of size n, clamped to [2, n-2].
    [[nodiscard]] std::pair<Eigen::Index, Eigen::Index> range(Eigen::Index n) const {
        const auto lo = std::max<Eigen::Index>({2, k_min, static_cast<Eigen::Index>(k_min_frac * static_cast<double>(n))});
        const auto hi = std::min<Eigen::Index>(n - 2, static_cast<Eigen::Index>(k_max_frac * static_cast<double>(n)));
        return {lo, hi};
    }
};

/// Stability criterion for every k in [k_min, k_max]:
///   (1/k) sum_{i=2}^{k} i^theta |g(i) - med{g(2..k)}|,   g = gamma1_hat
/// with the lower median, skipping i with p_hat(i) = 0. Entries with no
/// admissible i are NaN. Entry k-k_min holds the value at k.
template <typename Scalar>
[[nodiscard]] std::vector<Scalar> stability_criterion(const std::vector<TailEstimate<Scalar>>& path, double theta,
                                                      Eigen::Index k_min, Eigen::Index k_max) {
    using std::abs;
    using std::pow;
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    std::vector<Scalar> values;
    std::vector<Scalar> scratch;
    std::vector<Scalar> weights;
    for (const auto& t : path) {
        if (t.k > k_max) break;
        if (!std::isnan(static_cast<double>(t.gamma1_hat))) {
            values.push_back(t.gamma1_hat);
            weights.push_back(static_cast<Scalar>(pow(static_cast<double>(t.k), theta)));
        }
        if (t.k < k_min) continue;
        if (values.empty() || std::isnan(static_cast<double>(t.gamma1_hat))) {
            out.push_back(std::numeric_limits<Scalar>::quiet_NaN());
            continue;
        }
        scratch.assign(values.begin(), values.end());
        const auto mid = static_cast<std::ptrdiff_t>((scratch.size() + 1) / 2 - 1);
        std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
        const Scalar median = scratch[static_cast<std::size_t>(mid)];
        Scalar total(0);
        for (std::size_t i = 0; i < values.size(); ++i) total += weights[i] * abs(values[i] - median);
        out.push_back(total / static_cast<Scalar>(t.k));
    }
    return out;
}

/// Argmin of the stability criterion over [k_min, k_max]; ties go to the smaller k.
template <typename Scalar>
[[nodiscard]] Eigen::Index select_k_star(const CensoredSample<Scalar>& s, double theta, Eigen::Index k_min,
                                         Eigen::Index k_max) {
    if (!(k_min >= 2 && k_min < k_max && k_max <= s.size() - 1))
        throw DomainError("select_k_star: need 2 <= k_min < k_max <= n-1");
    if (!(theta >= 0.0 && theta <= 0.5)) throw DomainError("select_k_star: theta must lie in [0, 0.5]");
    const auto path = tail_path(s, k_max);
    const auto criterion = stability_criterion(path, theta, k_min, k_max);
    Eigen::Index best = -1;
    Scalar best_value = std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = 0; j < criterion.size(); ++j) {
        if (std::isnan(static_cast<double>(criterion[j]))) continue;
        if (best < 0 || criterion[j] < best_value) {
            best = k_min + static_cast<Eigen::Index>(j);
            best_value = criterion[j];
        }
    }
    if (best < 0) throw SelectionFailure("select_k_star: every candidate k has p_hat = 0");
    return best;
}

template <typename Scalar>
[[nodiscard]] Eigen::Index select_k_star(const CensoredSample<Scalar>& s, const KSelection& options = {}) {
    const auto [lo, hi] = options.range(s.size());
    return select_k_star(s, options.theta, lo, hi);
}

}  // namespace hcmean
