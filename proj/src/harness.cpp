#include "hcmean/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "hcmean/censoring.hpp"
#include "hcmean/estimator.hpp"
#include "hcmean/survival.hpp"

namespace hcmean {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ModelSpec<double> make_model(Family family, double gamma, double eta) {
    switch (family) {
        case Family::Pareto: return ModelSpec<double>::pareto(gamma);
        case Family::Frechet: return ModelSpec<double>::frechet(gamma);
        case Family::Burr: return ModelSpec<double>::burr(gamma, eta);
    }
    throw DomainError("unknown family");
}

CensoredSample<double> draw_censored(const CellSpec& cell, Stream stream) {
    auto x_stream = stream.child(0);
    auto y_stream = stream.child(1);
    const auto x = sample(cell.x_model(), cell.n, x_stream);
    const auto y = sample(cell.y_model(), cell.n, y_stream);
    return censor(x, y);
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    const auto workers = std::min<std::size_t>(threads, count);
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

ModelSpec<double> CellSpec::x_model() const { return make_model(family, gamma1, eta); }
ModelSpec<double> CellSpec::y_model() const { return make_model(family, gamma2(), eta); }

bool CellSummary::failed() const { return std::isnan(mu_hat_mean); }

ReplicateOutcome run_replicate(const CellSpec& cell, const CellControls& controls, std::uint64_t seed,
                               std::uint64_t cell_id, std::uint64_t replicate) {
    const Stream stream = Stream::keyed(seed, {cell_id, replicate});
    const auto s = draw_censored(cell, stream);
    ReplicateOutcome out;
    try {
        const Eigen::Index k = select_k_star(s, controls.selection);
        BootstrapOptions options;
        options.replicates = controls.boot_b;
        options.level = controls.level;
        options.method = controls.interval;
        options.selection = controls.selection;
        options.policy = controls.boot_policy == KPolicy::Kind::Fixed ? KPolicy::fixed(k) : KPolicy{KPolicy::Kind::Reauto, k};
        const auto boot = bootstrap_mu(s, options, stream.child(2));
        out.ok = true;
        out.mu_hat = boot.center;
        out.ci_lower = boot.ci_lower;
        out.ci_upper = boot.ci_upper;
        out.k = k;
    } catch (const EstimatorUndefined&) {
        out.ok = false;
    } catch (const SelectionFailure&) {
        out.ok = false;
    } catch (const UnreliableBootstrap&) {
        out.ok = false;
    }
    return out;
}

CellSummary summarize_cell(const CellSpec& cell, const std::vector<ReplicateOutcome>& outcomes) {
    CellSummary summary;
    summary.family = cell.family;
    summary.gamma1 = cell.gamma1;
    summary.gamma2 = cell.gamma2();
    summary.p = cell.p;
    summary.n = cell.n;
    summary.mu_true = true_mean(cell.x_model());

    std::vector<double> estimates, squared_errors, lowers, uppers, lengths, covered, ks;
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++summary.failures;
            continue;
        }
        estimates.push_back(o.mu_hat);
        squared_errors.push_back((o.mu_hat - summary.mu_true) * (o.mu_hat - summary.mu_true));
        lowers.push_back(o.ci_lower);
        uppers.push_back(o.ci_upper);
        lengths.push_back(o.ci_upper - o.ci_lower);
        covered.push_back(o.ci_lower <= summary.mu_true && summary.mu_true <= o.ci_upper ? 1.0 : 0.0);
        ks.push_back(static_cast<double>(o.k));
    }
    if (estimates.empty()) {
        summary.mu_hat_mean = summary.abs_bias = summary.mse = kNaN;
        summary.ci_mean_lower = summary.ci_mean_upper = summary.cov_prob = kNaN;
        summary.ci_length_mean = summary.k_star_mean = kNaN;
        return summary;
    }
    summary.mu_hat_mean = stats::mean(estimates);
    summary.abs_bias = std::abs(summary.mu_hat_mean - summary.mu_true);
    summary.mse = stats::mean(squared_errors);
    summary.ci_mean_lower = stats::mean(lowers);
    summary.ci_mean_upper = stats::mean(uppers);
    summary.cov_prob = stats::mean(covered);
    summary.ci_length_mean = stats::mean(lengths);
    summary.k_star_mean = stats::mean(ks);
    return summary;
}

CellSummary run_cell(const CellSpec& cell, std::size_t replicates, std::uint64_t seed, const CellControls& controls,
                     std::uint64_t cell_id, unsigned threads) {
    if (replicates < 1) throw DomainError("run_cell: need at least one replicate");
    std::vector<ReplicateOutcome> outcomes(replicates);
    parallel_for(replicates, threads,
                 [&](std::size_t r) { outcomes[r] = run_replicate(cell, controls, seed, cell_id, r); });
    return summarize_cell(cell, outcomes);
}

std::vector<CellSummary> run_grid(const GridConfig& config, unsigned threads, const ProgressFn& progress) {
    config.validate();
    std::vector<CellSpec> cells;
    for (double g : config.gamma1_list)
        for (double p : config.p_list)
            for (std::size_t n : config.n_list) cells.push_back({config.family, g, p, n, config.eta});

    const CellControls controls{config.selection, config.boot_b, config.level, config.boot_policy, config.interval};
    const std::size_t reps = config.replicates;
    std::vector<ReplicateOutcome> outcomes(cells.size() * reps);
    std::vector<std::atomic<std::size_t>> remaining(cells.size());
    for (auto& r : remaining) r = reps;
    std::vector<CellSummary> summaries(cells.size());
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    parallel_for(outcomes.size(), threads, [&](std::size_t i) {
        const std::size_t c = i / reps;
        outcomes[i] = run_replicate(cells[c], controls, config.seed, c, i % reps);
        if (--remaining[c] == 0) {
            const std::vector<ReplicateOutcome> slice(outcomes.begin() + static_cast<std::ptrdiff_t>(c * reps),
                                                      outcomes.begin() + static_cast<std::ptrdiff_t>((c + 1) * reps));
            summaries[c] = summarize_cell(cells[c], slice);
            const auto finished = ++done;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(summaries[c], finished, cells.size());
            }
        }
    });
    return summaries;
}

CltResult clt_experiment(const CellSpec& cell, std::size_t replicates, std::uint64_t seed,
                         std::optional<Eigen::Index> k, const KSelection& selection, unsigned threads) {
    const double mu = true_mean(cell.x_model());
    std::vector<double> values(replicates, kNaN);
    parallel_for(replicates, threads, [&](std::size_t r) {
        const auto s = draw_censored(cell, Stream::keyed(seed, {r}));
        try {
            const auto est = mu_hat(s, k, selection);
            values[r] = std::sqrt(static_cast<double>(est.tail.k)) * (est.mu_hat - mu) / est.tail_scale();
        } catch (const EstimatorUndefined&) {
        } catch (const SelectionFailure&) {
        }
    });
    CltResult result;
    for (double v : values) {
        if (std::isnan(v))
            ++result.failures;
        else
            result.z_scores.push_back(v);
    }
    if (result.z_scores.size() >= 8) {
        result.normality = stats::anderson_darling_normal(result.z_scores);
        result.skewness = stats::skewness(result.z_scores);
        result.excess_kurtosis = stats::excess_kurtosis(result.z_scores);
    }
    return result;
}

TailRatioResult tail_ratio_experiment(const CensoringDesign<double>& design, std::size_t n, Eigen::Index k,
                                           std::size_t replicates, std::uint64_t seed, unsigned threads) {
    if (replicates < 2) throw DomainError("tail_ratio_experiment: need at least 2 replicates");
    const auto x_model = ModelSpec<double>::pareto(design.gamma1);
    const auto y_model = ModelSpec<double>::pareto(design.gamma2);
    const auto m = static_cast<Eigen::Index>(n) - k;
    if (k < 1 || m < 1) throw DomainError("tail_ratio_experiment: k must lie in [1, n-1]");
    TailRatioResult result;
    result.statistics.resize(replicates);
    parallel_for(replicates, threads, [&](std::size_t r) {
        Stream stream = Stream::keyed(seed, {r});
        auto xs = stream.child(0);
        auto ys = stream.child(1);
        const auto s = censor(sample(x_model, n, xs), sample(y_model, n, ys));
        const double km = km_survival_product(s, m);
        const double exact = survival(x_model, s.order_stat(m));
        result.statistics[r] = std::sqrt(static_cast<double>(k)) * (km / exact - 1.0);
    });
    result.mean = stats::mean(result.statistics);
    result.variance = stats::variance(result.statistics);
    return result;
}

}  // namespace hcmean
