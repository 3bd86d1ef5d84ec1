// hcmean: tail-corrected mean estimation for randomly right-censored heavy-tailed data.
//
//   hcmean estimate --input data.csv [--k auto|<int>] [--ci] [--json]
//   hcmean ktrace   --input data.csv --out trace.csv
//   hcmean simulate --config grid.json --out results/ [--format csv|markdown] [--threads N] [--full]

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcmean/bootstrap.hpp"
#include "hcmean/censoring.hpp"
#include "hcmean/error.hpp"
#include "hcmean/estimator.hpp"
#include "hcmean/harness.hpp"
#include "hcmean/survival.hpp"
#include "hcmean/tail.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

struct SelectionArgs {
    double theta = 0.3;
    std::optional<long> k_min;
    std::optional<long> k_max;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--theta", theta, "Weight exponent of the stability criterion")
            ->check(CLI::Range(0.0, 0.5));
        cmd->add_option("--kmin", k_min, "Smallest candidate k (default max(2, 2.5% of n))");
        cmd->add_option("--kmax", k_max, "Largest candidate k (default n/4)");
    }

    // Range for a sample of size n, with explicit bounds overriding the fractions.
    [[nodiscard]] std::pair<Eigen::Index, Eigen::Index> range(Eigen::Index n, hcmean::KSelection& selection) const {
        selection.theta = theta;
        auto [lo, hi] = selection.range(n);
        if (k_min) {
            lo = *k_min;
            selection.k_min = *k_min;
            selection.k_min_frac = 0.0;
        }
        if (k_max) {
            hi = *k_max;
            selection.k_max_frac = static_cast<double>(*k_max) / static_cast<double>(n);
        }
        return {lo, hi};
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int run_estimate(const std::string& input, const std::string& k_arg, const SelectionArgs& sel, bool with_ci,
                 std::size_t boot_b, const std::string& boot_policy, double level, const std::string& ci_method,
                 std::uint64_t seed, bool json) {
    const auto s = hcmean::read_sample_csv(input);
    if (s.uncensored_count() == 0)
        std::cerr << "warning: every observation is censored; the KM mean is degenerate (0)\n";

    hcmean::KSelection selection;
    const auto [lo, hi] = sel.range(s.size(), selection);
    Eigen::Index k = 0;
    if (k_arg == "auto") {
        k = hcmean::select_k_star(s, selection.theta, lo, hi);
    } else {
        try {
            k = std::stol(k_arg);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--k", "expected 'auto' or an integer");
        }
    }
    const auto est = hcmean::mu_hat(s, k);

    nlohmann::ordered_json record;
    record["n"] = s.size();
    record["k"] = est.tail.k;
    record["mu_hat"] = est.mu_hat;
    record["mu1_hat"] = est.mu1_hat;
    record["mu2_hat"] = est.mu2_hat;
    record["gamma1_hat"] = est.tail.gamma1_hat;
    record["gamma_hill"] = est.tail.gamma_hill;
    record["p_hat"] = est.tail.p_hat;
    record["km_mean"] = est.km_baseline;

    if (with_ci) {
        hcmean::BootstrapOptions options;
        options.replicates = boot_b;
        options.level = level;
        options.selection = selection;
        options.method = ci_method == "percentile" ? hcmean::IntervalMethod::Percentile : hcmean::IntervalMethod::Normal;
        options.policy = boot_policy == "reauto" ? hcmean::KPolicy{hcmean::KPolicy::Kind::Reauto, k}
                                                 : hcmean::KPolicy::fixed(k);
        const auto boot = hcmean::bootstrap_mu(s, options, hcmean::Stream(seed));
        record["boot_b"] = boot.b;
        record["boot_failures"] = boot.failures;
        record["boot_mean"] = boot.boot_mean;
        record["boot_sd"] = boot.boot_sd;
        record["level"] = boot.level;
        record["ci_lower"] = boot.ci_lower;
        record["ci_upper"] = boot.ci_upper;
    }

    if (json) {
        std::cout << record.dump() << '\n';
    } else {
        for (const auto& [key, value] : record.items()) {
            std::cout << key << " = ";
            if (value.is_number_float())
                std::cout << num(value.get<double>());
            else
                std::cout << value.dump();
            std::cout << '\n';
        }
    }
    return kExitOk;
}

int run_ktrace(const std::string& input, const std::string& out_path, const SelectionArgs& sel) {
    const auto s = hcmean::read_sample_csv(input);
    hcmean::KSelection selection;
    const auto [lo, hi] = sel.range(s.size(), selection);
    if (!(lo >= 2 && lo <= hi && hi <= s.size() - 1)) throw hcmean::DomainError("ktrace: invalid k range");
    const auto path = hcmean::tail_path(s, hi);
    const auto criterion = hcmean::stability_criterion(path, selection.theta, lo, hi);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << "k,gamma_hill,p_hat,gamma1_hat,criterion\n";
    for (Eigen::Index k = lo; k <= hi; ++k) {
        const auto& t = path[static_cast<std::size_t>(k - 2)];
        const double c = criterion[static_cast<std::size_t>(k - lo)];
        out << k << ',' << num(t.gamma_hill) << ',' << num(t.p_hat) << ','
            << (std::isnan(t.gamma1_hat) ? std::string("nan") : num(t.gamma1_hat)) << ','
            << (std::isnan(c) ? std::string("nan") : num(c)) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + out_path);
    return kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& out_dir, const std::string& format,
                 unsigned threads, bool full, const std::string& family_override) {
    hcmean::GridConfig config;
    try {
        if (!config_path.empty()) config = hcmean::load_config(config_path);
        if (!family_override.empty()) config.family = hcmean::parse_family(family_override);
        if (full) {
            const auto grid = hcmean::full_grid(config.family);
            config.gamma1_list = grid.gamma1_list;
            config.p_list = grid.p_list;
            config.n_list = grid.n_list;
            config.replicates = grid.replicates;
        }
        config.validate();
    } catch (const hcmean::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hcmean::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    std::filesystem::create_directories(out_dir);
    const auto summaries = hcmean::run_grid(
        config, threads, [](const hcmean::CellSummary& s, std::size_t done, std::size_t total) {
            std::cerr << "[" << done << "/" << total << "] " << hcmean::to_string(s.family) << " gamma1=" << s.gamma1
                      << " p=" << s.p << " n=" << s.n << " mu_hat=" << num(s.mu_hat_mean)
                      << " failures=" << s.failures << '\n';
        });

    const bool markdown = format == "markdown";
    const auto path = std::filesystem::path(out_dir) / (markdown ? "summary.md" : "summary.csv");
    hcmean::write_tables(summaries, markdown ? hcmean::TableFormat::Markdown : hcmean::TableFormat::Csv,
                         path.string());
    std::cerr << "wrote " << path.string() << '\n';

    for (const auto& s : summaries)
        if (s.failed()) return kExitPartial;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail-corrected mean estimation under random right censoring"};
    app.require_subcommand(1);

    auto* estimate = app.add_subcommand("estimate", "Estimate the mean from a z,delta CSV");
    std::string input;
    std::string k_arg = "auto";
    SelectionArgs est_sel;
    bool with_ci = false;
    std::size_t boot_b = 500;
    std::string boot_policy = "fixed";
    double level = 0.95;
    std::string ci_method = "normal";
    std::uint64_t seed = 1;
    bool json = false;
    estimate->add_option("--input", input, "CSV with header z,delta")->required()->check(CLI::ExistingFile);
    estimate->add_option("--k", k_arg, "Number of top order statistics, or 'auto'");
    est_sel.add_to(estimate);
    estimate->add_flag("--ci", with_ci, "Add a bootstrap confidence interval");
    estimate->add_option("--boot-b", boot_b, "Bootstrap replicates")->check(CLI::Range(2, 1000000));
    estimate->add_option("--boot-policy", boot_policy, "k per resample: fixed|reauto")
        ->check(CLI::IsMember({"fixed", "reauto"}));
    estimate->add_option("--level", level, "Confidence level")->check(CLI::Range(0.0, 1.0));
    estimate->add_option("--ci-method", ci_method, "normal|percentile")->check(CLI::IsMember({"normal", "percentile"}));
    estimate->add_option("--seed", seed, "Bootstrap seed");
    estimate->add_flag("--json", json, "Print one JSON-lines record instead of key = value text");

    auto* ktrace = app.add_subcommand("ktrace", "Write the tail estimates and selection criterion for each k");
    std::string trace_input;
    std::string trace_out;
    SelectionArgs trace_sel;
    ktrace->add_option("--input", trace_input, "CSV with header z,delta")->required()->check(CLI::ExistingFile);
    ktrace->add_option("--out", trace_out, "Output CSV")->required();
    trace_sel.add_to(ktrace);

    auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo grid");
    std::string config_path;
    std::string out_dir;
    std::string format = "csv";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool full = false;
    std::string family;
    simulate->add_option("--config", config_path, "Flat JSON grid configuration");
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--format", format, "csv|markdown")->check(CLI::IsMember({"csv", "markdown"}));
    simulate->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    simulate->add_flag("--full", full, "Full grid with 1000 replicates per cell (slow)");
    simulate->add_option("--family", family, "Override the config family")
        ->check(CLI::IsMember({"frechet", "burr", "pareto"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*estimate)
            return run_estimate(input, k_arg, est_sel, with_ci, boot_b, boot_policy, level, ci_method, seed, json);
        if (*ktrace) return run_ktrace(trace_input, trace_out, trace_sel);
        if (*simulate) {
            if (config_path.empty() && !full) {
                std::cerr << "config error: --config is required unless --full is given\n";
                return kExitConfig;
            }
            return run_simulate(config_path, out_dir, format, threads, full, family);
        }
    } catch (const hcmean::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}
