#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hcmean/censoring.hpp"
#include "hcmean/error.hpp"
#include "hcmean/estimator.hpp"
#include "hcmean/random.hpp"
#include "hcmean/stats.hpp"
#include "hcmean/tail.hpp"

namespace hcmean {

/// How each resample chooses k: the original sample's k, or a fresh selection.
struct KPolicy {
    enum class Kind { Fixed, Reauto };
    Kind kind = Kind::Fixed;
    /// k on the original sample (and on every resample for Fixed).
    /// Empty means "select on the original sample".
    std::optional<Eigen::Index> k;

    static KPolicy fixed(Eigen::Index k) { return {Kind::Fixed, k}; }
    static KPolicy fixed_auto() { return {Kind::Fixed, std::nullopt}; }
    static KPolicy reauto() { return {Kind::Reauto, std::nullopt}; }
};

enum class IntervalMethod { Normal, Percentile };

struct BootstrapOptions {
    std::size_t replicates = 500;
    KPolicy policy = KPolicy::fixed_auto();
    double level = 0.95;
    IntervalMethod method = IntervalMethod::Normal;
    KSelection selection{};
};

struct BootstrapResult {
    std::size_t b = 0;
    std::vector<double> estimates;  ///< successful replicate estimates, in replicate order
    std::size_t failures = 0;
    double center = 0.0;            ///< estimate on the original sample
    Eigen::Index k = 0;             ///< k used on the original sample
    double boot_mean = 0.0;
    double boot_sd = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double level = 0.95;
};

/// Resample n pairs with replacement. Drawing indices into the sorted sample
/// and expanding the multiplicities in index order yields an already sorted
/// resample, so no sort is needed.
template <typename Scalar, IndexSource Source>
[[nodiscard]] CensoredSample<Scalar> resample(const CensoredSample<Scalar>& s, Source& source) {
    const Eigen::Index n = s.size();
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i) ++counts[source.below(static_cast<std::uint64_t>(n))];
    ArrayX<Scalar> z(n);
    FlagArray delta(n);
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::uint32_t c = 0; c < counts[static_cast<std::size_t>(i)]; ++c, ++pos) {
            z[pos] = s.z()[i];
            delta[pos] = s.delta()[i];
        }
    }
    return CensoredSample<Scalar>::from_sorted(std::move(z), std::move(delta));
}

/// Bootstrap distribution of the tail-corrected mean estimator.
///
/// Replicate r draws from `streams.child(r)`. Replicates whose estimator is
/// undefined (p_hat = 0, gamma1_hat >= 1, or no admissible k) are counted as
/// failures and dropped. The normal interval is centered at the
/// original-sample estimate with half-width z_{(1+level)/2} * boot_sd.
template <typename Scalar, typename StreamFactory>
[[nodiscard]] BootstrapResult bootstrap_mu(const CensoredSample<Scalar>& s, const BootstrapOptions& options,
                                           const StreamFactory& streams) {
    if (options.replicates < 2) throw DomainError("bootstrap: need at least 2 replicates");
    if (!(options.level > 0.0 && options.level < 1.0)) throw DomainError("bootstrap: level must lie in (0,1)");

    BootstrapResult result;
    result.b = options.replicates;
    result.level = options.level;

    const bool reauto = options.policy.kind == KPolicy::Kind::Reauto;
    const Eigen::Index k = options.policy.k ? *options.policy.k : select_k_star(s, options.selection);
    const auto original = mu_hat(s, k);
    result.center = static_cast<double>(original.mu_hat);
    result.k = k;

    result.estimates.reserve(options.replicates);
    for (std::size_t r = 0; r < options.replicates; ++r) {
        auto source = streams.child(static_cast<std::uint64_t>(r));
        const auto boot = resample(s, source);
        try {
            const Eigen::Index kb = reauto ? select_k_star(boot, options.selection) : k;
            result.estimates.push_back(static_cast<double>(mu_hat(boot, kb).mu_hat));
        } catch (const EstimatorUndefined&) {
            ++result.failures;
        } catch (const SelectionFailure&) {
            ++result.failures;
        }
    }
    if (2 * result.failures > options.replicates) throw UnreliableBootstrap(result.failures, options.replicates);

    result.boot_mean = stats::mean(result.estimates);
    const bool constant = std::all_of(result.estimates.begin(), result.estimates.end(),
                                      [&](double v) { return v == result.estimates.front(); });
    result.boot_sd = constant ? 0.0 : std::sqrt(stats::variance(result.estimates));
    if (options.method == IntervalMethod::Normal) {
        const double half = stats::normal_quantile(0.5 * (1.0 + options.level)) * result.boot_sd;
        result.ci_lower = result.center - half;
        result.ci_upper = result.center + half;
    } else {
        result.ci_lower = stats::sample_quantile(result.estimates, 0.5 * (1.0 - options.level));
        result.ci_upper = stats::sample_quantile(result.estimates, 0.5 * (1.0 + options.level));
    }
    return result;
}

}  // namespace hcmean
