#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hcmean/models.hpp"
#include "hcmean/random.hpp"
#include "hcmean/tail.hpp"
#include "support.hpp"

using namespace hcmean;

namespace {

// Criterion straight from its definition, O(k^2) per k.
double criterion_oracle(const CensoredSample<double>& s, Eigen::Index k, double theta) {
    std::vector<double> g;
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 2; i <= k; ++i) {
        const double ph = p_hat(s, i);
        if (ph == 0.0) continue;
        g.push_back(hill(s, i) / ph);
        idx.push_back(i);
    }
    if (g.empty() || p_hat(s, k) == 0.0) return std::nan("");
    auto sorted = g;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[(sorted.size() + 1) / 2 - 1];
    double total = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        total += std::pow(static_cast<double>(idx[j]), theta) * std::abs(g[j] - med);
    return total / static_cast<double>(k);
}

}  // namespace

TEST_CASE("Hill estimator on hand-computed inputs") {
    const auto s = testing::make({1, 2, 4, 8}, {1, 1, 1, 1});
    CHECK(hill(s, 2) == doctest::Approx((std::log(4.0) + std::log(2.0)) / 2.0).epsilon(1e-15));
    CHECK(hill(s, 2) == doctest::Approx(1.0397).epsilon(1e-4));
    const auto flat = testing::make({1, 2, 5, 5, 5}, {1, 1, 1, 1, 1});
    CHECK(hill(flat, 2) == 0.0);
    CHECK_THROWS_AS((void)hill(s, 1), DomainError);
    CHECK_THROWS_AS((void)hill(s, 4), DomainError);
}

TEST_CASE("uncensored proportion among the top k") {
    const auto all = testing::make({1, 2, 3, 4, 5}, {1, 1, 1, 1, 1});
    CHECK(p_hat(all, 3) == 1.0);
    const auto mixed = testing::make({1, 2, 3, 4, 5, 6}, {1, 1, 0, 1, 0, 1});
    CHECK(p_hat(mixed, 4) == 0.5);
}

TEST_CASE("adapted tail index divides Hill by p_hat") {
    const auto all = testing::make({1, 2, 4, 8}, {1, 1, 1, 1});
    CHECK(gamma1_hat(all, 2) == hill(all, 2));
    const auto tail_censored = testing::make({1, 2, 3, 4, 5}, {1, 1, 1, 0, 0});
    CHECK_THROWS_AS((void)gamma1_hat(tail_censored, 2), EstimatorUndefined);
    const auto t = tail_estimate(tail_censored, 2);
    CHECK(std::isnan(t.gamma1_hat));
    CHECK(t.p_hat == 0.0);
}

TEST_CASE("Hill and the adapted index are scale invariant") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = testing::random_sample(gen, 40);
        const auto t = s.scaled(123.456);
        for (Eigen::Index k = 2; k < 40; k += 5) {
            CHECK(std::abs(hill(t, k) - hill(s, k)) < 1e-12);
            if (p_hat(s, k) > 0) CHECK(std::abs(gamma1_hat(t, k) - gamma1_hat(s, k)) < 1e-12);
        }
    }
}

TEST_CASE("p_hat times k is an integer") {
    std::mt19937_64 gen(9);
    const auto s = testing::random_sample(gen, 300, 0.45);
    for (Eigen::Index k = 2; k < 300; ++k) {
        const double count = p_hat(s, k) * static_cast<double>(k);
        CHECK(std::abs(count - std::round(count)) < 1e-9);
    }
}

TEST_CASE("Hill depends only on the top order statistics") {
    std::mt19937_64 gen(10);
    const auto s = testing::random_sample(gen, 100);
    const Eigen::Index k = 20;
    // Perturb everything strictly below Z_{n-k:n} while keeping the order.
    ArrayX<double> z = s.z();
    for (Eigen::Index i = 0; i < s.size() - k - 1; ++i) z[i] = z[i] * 0.5;
    const auto t = CensoredSample<double>::from_sorted(z, s.delta());
    CHECK(hill(t, k) == hill(s, k));
}

TEST_CASE("tail path agrees with pointwise estimates") {
    std::mt19937_64 gen(12);
    const auto s = testing::random_sample(gen, 200, 0.3);
    const auto path = tail_path(s, 150);
    REQUIRE(path.size() == 149);
    for (Eigen::Index k = 2; k <= 150; ++k) {
        const auto& t = path[static_cast<std::size_t>(k - 2)];
        CHECK(t.k == k);
        CHECK(t.gamma_hill == doctest::Approx(hill(s, k)).epsilon(1e-12));
        CHECK(t.p_hat == p_hat(s, k));
    }
}

TEST_CASE("stability criterion matches its definition") {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = testing::random_sample(gen, 120, 0.5);
        const double theta = 0.1 * (trial % 6);
        const auto crit = stability_criterion(tail_path(s, 40), theta, 5, 40);
        for (Eigen::Index k = 5; k <= 40; ++k) {
            const double expected = criterion_oracle(s, k, theta);
            const double got = crit[static_cast<std::size_t>(k - 5)];
            if (std::isnan(expected))
                CHECK(std::isnan(got));
            else
                CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("selected k minimizes the criterion") {
    std::mt19937_64 gen(14);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = testing::random_sample(gen, 150, 0.3);
        const Eigen::Index k = select_k_star(s, 0.3, 3, 37);
        CHECK(k >= 3);
        CHECK(k <= 37);
        const double best = criterion_oracle(s, k, 0.3);
        for (Eigen::Index j = 3; j <= 37; ++j) {
            const double c = criterion_oracle(s, j, 0.3);
            if (std::isnan(c)) continue;
            CHECK(c >= best - 1e-12);
        }
    }
}

TEST_CASE("ties in the criterion go to the smaller k") {
    // Constant data: every adapted index is 0, so the criterion is 0 everywhere.
    const auto s = CensoredSample<double>::from_sorted(ArrayX<double>::Constant(60, 3.0), FlagArray::Constant(60, true));
    CHECK(select_k_star(s, 0.3, 4, 15) == 4);
}

TEST_CASE("selection is scale invariant and stays in range") {
    Stream stream(15);
    const auto model = ModelSpec<double>::frechet(0.3);
    for (int trial = 0; trial < 20; ++trial) {
        auto xs = stream.child(2 * trial);
        auto ys = stream.child(2 * trial + 1);
        const auto s = censor(sample(model, 500, xs), sample(ModelSpec<double>::frechet(0.5), 500, ys));
        const KSelection opts;
        const auto [lo, hi] = opts.range(500);
        const auto k = select_k_star(s, opts);
        CHECK(k >= lo);
        CHECK(k <= hi);
        CHECK(select_k_star(s.scaled(17.0), opts) == k);
    }
}

TEST_CASE("selection on an exact quantile grid recovers the index") {
    const Eigen::Index n = 2000;
    const double gamma = 0.4;
    ArrayX<double> z(n);
    for (Eigen::Index i = 1; i <= n; ++i)
        z[i - 1] = std::pow(static_cast<double>(n + 1 - i) / static_cast<double>(n + 1), -gamma);
    const auto s = CensoredSample<double>::from_sorted(z, FlagArray::Constant(n, true));
    const KSelection opts;
    const auto k = select_k_star(s, opts);
    const auto [lo, hi] = opts.range(n);
    CHECK(k >= lo);
    CHECK(k <= hi);
    CHECK(std::abs(gamma1_hat(s, k) - gamma) < 0.01);
}

TEST_CASE("selection argument checks and failure") {
    const auto s = testing::make({1, 2, 3, 4, 5, 6, 7, 8}, {1, 1, 1, 1, 0, 0, 0, 0});
    CHECK_THROWS_AS((void)select_k_star(s, 0.3, 1, 4), DomainError);
    CHECK_THROWS_AS((void)select_k_star(s, 0.3, 4, 4), DomainError);
    CHECK_THROWS_AS((void)select_k_star(s, 0.3, 2, 8), DomainError);
    CHECK_THROWS_AS((void)select_k_star(s, 0.7, 2, 4), DomainError);
    CHECK_THROWS_AS((void)select_k_star(s, 0.3, 2, 4), SelectionFailure);
}

TEST_CASE("Hill is consistent on large Pareto samples") {
    const auto model = ModelSpec<double>::pareto(0.5);
    double total = 0.0;
    const int runs = 50;
    for (int r = 0; r < runs; ++r) {
        Stream stream = Stream::keyed(21, {static_cast<std::uint64_t>(r)});
        auto xs = stream.child(0);
        auto x = sample(model, 100000, xs);
        std::sort(x.begin(), x.end());
        const auto s = CensoredSample<double>::from_sorted(x, FlagArray::Constant(x.size(), true));
        total += hill(s, static_cast<Eigen::Index>(std::pow(1e5, 0.6)));
    }
    CHECK(std::abs(total / runs - 0.5) < 0.05);
}

TEST_CASE("p_hat and the adapted index are consistent under censoring") {
    double p_total = 0.0;
    double g_total = 0.0;
    const int runs = 100;
    for (int r = 0; r < runs; ++r) {
        Stream stream = Stream::keyed(22, {static_cast<std::uint64_t>(r)});
        auto xs = stream.child(0);
        auto ys = stream.child(1);
        const auto s = censor(sample(ModelSpec<double>::frechet(0.3), 2000, xs),
                              sample(ModelSpec<double>::frechet(gamma2_for(0.6, 0.3)), 2000, ys));
        p_total += p_hat(s, select_k_star(s));

        auto px = stream.child(2);
        auto py = stream.child(3);
        const auto t = censor(sample(ModelSpec<double>::pareto(0.4), 5000, px),
                              sample(ModelSpec<double>::pareto(gamma2_for(0.5, 0.4)), 5000, py));
        g_total += gamma1_hat(t, select_k_star(t));
    }
    CHECK(std::abs(p_total / runs - 0.6) < 0.08);
    CHECK(std::abs(g_total / runs - 0.4) < 0.06);
}

TEST_CASE("k range defaults") {
    const KSelection opts;
    CHECK(opts.range(1000) == std::pair<Eigen::Index, Eigen::Index>{25, 250});
    CHECK(opts.range(40) == std::pair<Eigen::Index, Eigen::Index>{2, 10});
    KSelection wide{0.3, 2, 0.0, 0.25};
    CHECK(wide.range(1000).first == 2);
}
