#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hcmean/bootstrap.hpp"
#include "hcmean/random.hpp"
#include "support.hpp"

using namespace hcmean;

namespace {

// Always picks index 0, so every resample is n copies of the smallest point.
struct ZeroIndex {
    std::uint64_t below(std::uint64_t) { return 0; }
};

struct ZeroStreams {
    ZeroIndex child(std::uint64_t) const { return {}; }
};

// Every child replays the same seed, so all resamples coincide.
struct SameStreams {
    Stream child(std::uint64_t) const { return Stream(5); }
};

}  // namespace

TEST_CASE("resample draws with replacement and stays sorted") {
    std::mt19937_64 gen(1);
    const auto s = testing::random_sample(gen, 500, 0.3);
    Stream stream(2);
    const auto r = resample(s, stream);
    CHECK(r.size() == s.size());
    for (Eigen::Index i = 1; i < r.size(); ++i) CHECK(r.z()[i - 1] <= r.z()[i]);
    // every resampled pair exists in the original
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        bool found = false;
        for (Eigen::Index j = 0; j < s.size() && !found; ++j)
            found = s.z()[j] == r.z()[i] && s.delta()[j] == r.delta()[i];
        CHECK(found);
    }
}

TEST_CASE("resampled index counts look uniform") {
    const auto s = testing::make({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    std::vector<double> hits(10, 0.0);
    Stream stream(3);
    for (int rep = 0; rep < 20000; ++rep) {
        auto child = stream.child(rep);
        const auto r = resample(s, child);
        for (Eigen::Index i = 0; i < r.size(); ++i) hits[static_cast<std::size_t>(r.z()[i]) - 1] += 1.0;
    }
    double chi2 = 0.0;
    for (double h : hits) chi2 += (h - 20000.0) * (h - 20000.0) / 20000.0;
    CHECK(chi2 < 27.88);  // 0.999 quantile of chi-square with 9 degrees of freedom
}

TEST_CASE("constant data give a zero-width interval") {
    const auto s = CensoredSample<double>::from_sorted(ArrayX<double>::Constant(40, 2.0), FlagArray::Constant(40, true));
    BootstrapOptions opt;
    opt.replicates = 50;
    opt.policy = KPolicy::fixed(5);
    const auto r = bootstrap_mu(s, opt, Stream(7));
    CHECK(r.boot_sd == 0.0);
    CHECK(r.ci_lower == r.ci_upper);
    CHECK(r.ci_lower == r.center);
}

TEST_CASE("identical resamples give zero spread") {
    std::mt19937_64 gen(4);
    const auto s = testing::random_sample(gen, 200, 0.2);
    BootstrapOptions opt;
    opt.replicates = 2;
    opt.policy = KPolicy::fixed(20);
    const auto r = bootstrap_mu(s, opt, SameStreams{});
    if (r.estimates.size() == 2) {
        CHECK(r.estimates[0] == r.estimates[1]);
        CHECK(r.boot_sd == 0.0);
    }
}

TEST_CASE("failure accounting and the unreliable threshold") {
    // All resamples collapse to the smallest point: Hill is 0, so the estimate is defined.
    const auto s = testing::make({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    BootstrapOptions opt;
    opt.replicates = 10;
    opt.policy = KPolicy::fixed(3);
    const auto ok = bootstrap_mu(s, opt, ZeroStreams{});
    CHECK(ok.failures == 0);
    CHECK(ok.estimates.size() == 10);

    // A censored smallest point makes every resample all-censored in the tail.
    const auto t = testing::make({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {0, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    try {
        (void)bootstrap_mu(t, opt, ZeroStreams{});
        FAIL("expected an unreliable bootstrap");
    } catch (const UnreliableBootstrap& e) {
        CHECK(e.failures() == 10);
        CHECK(e.replicates() == 10);
    }
}

TEST_CASE("argument checks") {
    std::mt19937_64 gen(5);
    const auto s = testing::random_sample(gen, 100);
    BootstrapOptions opt;
    opt.replicates = 1;
    CHECK_THROWS_AS((void)bootstrap_mu(s, opt, Stream(1)), DomainError);
    opt.replicates = 10;
    opt.level = 1.0;
    CHECK_THROWS_AS((void)bootstrap_mu(s, opt, Stream(1)), DomainError);
}

TEST_CASE("result invariants and determinism") {
    Stream stream(6);
    auto xs = stream.child(0);
    auto ys = stream.child(1);
    const auto s = censor(sample(ModelSpec<double>::frechet(0.3), 1000, xs),
                          sample(ModelSpec<double>::frechet(gamma2_for(0.7, 0.3)), 1000, ys));
    for (auto method : {IntervalMethod::Normal, IntervalMethod::Percentile}) {
        for (auto policy : {KPolicy::fixed_auto(), KPolicy::reauto()}) {
            BootstrapOptions opt;
            opt.replicates = 100;
            opt.method = method;
            opt.policy = policy;
            const auto a = bootstrap_mu(s, opt, stream.child(9));
            const auto b = bootstrap_mu(s, opt, stream.child(9));
            CHECK(a.estimates == b.estimates);
            CHECK(a.ci_lower == b.ci_lower);
            CHECK(a.ci_upper == b.ci_upper);
            CHECK(a.estimates.size() + a.failures == a.b);
            CHECK(a.ci_lower <= a.ci_upper);
            CHECK(a.boot_sd > 0.0);
            CHECK(a.k == select_k_star(s, opt.selection));
            if (method == IntervalMethod::Normal) {
                CHECK(a.ci_lower <= a.center);
                CHECK(a.center <= a.ci_upper);
                CHECK((a.ci_lower + a.ci_upper) / 2 == doctest::Approx(a.center).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("normal interval half-width uses the bootstrap sd") {
    std::mt19937_64 gen(7);
    const auto s = testing::random_sample(gen, 400, 0.2);
    BootstrapOptions opt;
    opt.replicates = 200;
    opt.level = 0.9;
    opt.policy = KPolicy::fixed(30);
    const auto r = bootstrap_mu(s, opt, Stream(8));
    double m = 0.0;
    for (double v : r.estimates) m += v;
    m /= static_cast<double>(r.estimates.size());
    double ss = 0.0;
    for (double v : r.estimates) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(r.estimates.size() - 1));
    CHECK(r.boot_sd == doctest::Approx(sd).epsilon(1e-12));
    CHECK((r.ci_upper - r.ci_lower) / 2 == doctest::Approx(1.6448536269514722 * sd).epsilon(1e-12));
}
