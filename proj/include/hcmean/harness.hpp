#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hcmean/bootstrap.hpp"
#include "hcmean/models.hpp"
#include "hcmean/stats.hpp"
#include "hcmean/tail.hpp"

namespace hcmean {

/// Monte-Carlo grid: the Cartesian product gamma1_list x p_list x n_list for one family.
struct GridConfig {
    Family family = Family::Frechet;
    double eta = 0.25;
    std::vector<double> gamma1_list{0.3, 0.4, 0.5};
    std::vector<double> p_list{0.4, 0.5, 0.6, 0.7};
    std::vector<std::size_t> n_list{500, 1000, 1500, 2000};
    std::size_t replicates = 1000;
    std::uint64_t seed = 20240601;
    KSelection selection{};
    std::size_t boot_b = 500;
    double level = 0.95;
    KPolicy::Kind boot_policy = KPolicy::Kind::Fixed;
    IntervalMethod interval = IntervalMethod::Normal;

    /// Throws ConfigError when any grid value or control is out of range.
    void validate() const;
};

/// The full simulation grid for a family: 3 tail indices x 4 censoring levels x 4 sizes, 1000 replicates.
[[nodiscard]] GridConfig full_grid(Family family);

/// Parses a flat JSON object whose keys mirror GridConfig.
[[nodiscard]] GridConfig parse_config(const std::string& text);
[[nodiscard]] GridConfig load_config(const std::string& path);

struct CellSpec {
    Family family = Family::Frechet;
    double gamma1 = 0.3;
    double p = 0.5;
    std::size_t n = 1000;
    double eta = 0.25;

    [[nodiscard]] ModelSpec<double> x_model() const;
    [[nodiscard]] ModelSpec<double> y_model() const;
    [[nodiscard]] double gamma2() const { return gamma2_for(p, gamma1); }
};

struct CellControls {
    KSelection selection{};
    std::size_t boot_b = 500;
    double level = 0.95;
    KPolicy::Kind boot_policy = KPolicy::Kind::Fixed;
    IntervalMethod interval = IntervalMethod::Normal;
};

struct CellSummary {
    Family family = Family::Frechet;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double p = 0.0;
    std::size_t n = 0;
    double mu_true = 0.0;
    double mu_hat_mean = 0.0;
    double abs_bias = 0.0;
    double mse = 0.0;
    double ci_mean_lower = 0.0;
    double ci_mean_upper = 0.0;
    double cov_prob = 0.0;
    double ci_length_mean = 0.0;
    std::size_t failures = 0;
    double k_star_mean = 0.0;

    /// Every replicate failed; numeric fields are NaN.
    [[nodiscard]] bool failed() const;
};

/// One Monte-Carlo replicate. Draw r of cell c uses Stream::keyed(seed, {c, r}).
struct ReplicateOutcome {
    bool ok = false;
    double mu_hat = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    Eigen::Index k = 0;
};

[[nodiscard]] ReplicateOutcome run_replicate(const CellSpec& cell, const CellControls& controls, std::uint64_t seed,
                                             std::uint64_t cell_id, std::uint64_t replicate);

[[nodiscard]] CellSummary summarize_cell(const CellSpec& cell, const std::vector<ReplicateOutcome>& outcomes);

[[nodiscard]] CellSummary run_cell(const CellSpec& cell, std::size_t replicates, std::uint64_t seed,
                                   const CellControls& controls = {}, std::uint64_t cell_id = 0,
                                   unsigned threads = 1);

using ProgressFn = std::function<void(const CellSummary&, std::size_t done, std::size_t total)>;

/// Cells in gamma1-major, then p, then n order; identical output for any thread count.
[[nodiscard]] std::vector<CellSummary> run_grid(const GridConfig& config, unsigned threads = 1,
                                                const ProgressFn& progress = {});

struct CltResult {
    std::vector<double> z_scores;
    std::size_t failures = 0;
    stats::NormalityTest normality{};
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

/// Standardized statistic sqrt(k)(mu_hat - mu) / (Z_{n-k:n} Fbar_n(Z_{n-k:n})) per replicate.
/// With `k` empty each replicate selects its own k.
[[nodiscard]] CltResult clt_experiment(const CellSpec& cell, std::size_t replicates, std::uint64_t seed,
                                       std::optional<Eigen::Index> k, const KSelection& selection = {},
                                       unsigned threads = 1);

struct TailRatioResult {
    double mean = 0.0;
    double variance = 0.0;
    std::vector<double> statistics;
};

/// sqrt(k)(Fbar_n(Z_{n-k:n}) / Fbar(Z_{n-k:n}) - 1) for Pareto X and Pareto Y, where Fbar is exact.
[[nodiscard]] TailRatioResult tail_ratio_experiment(const CensoringDesign<double>& design, std::size_t n,
                                                         Eigen::Index k, std::size_t replicates,
                                                         std::uint64_t seed, unsigned threads = 1);

enum class TableFormat { Csv, Markdown };

void write_csv(std::ostream& out, const std::vector<CellSummary>& summaries);
[[nodiscard]] std::vector<CellSummary> read_csv(std::istream& in);
void write_markdown(std::ostream& out, const std::vector<CellSummary>& summaries);
void write_tables(const std::vector<CellSummary>& summaries, TableFormat format, const std::string& path);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace hcmean
