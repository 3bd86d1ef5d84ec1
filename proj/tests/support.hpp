#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hcmean/censoring.hpp"

namespace testing {

// Continuous censored sample of size n with roughly `censor_rate` censored points.
inline hcmean::CensoredSample<double> random_sample(std::mt19937_64& gen, Eigen::Index n, double censor_rate = 0.3) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<hcmean::ObservationRow> rows;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double z = std::pow(1.0 - unit(gen), -0.4);
        rows.push_back({z, unit(gen) < censor_rate ? 0 : 1});
    }
    return hcmean::load_sample(rows);
}

inline std::vector<double> to_vector(const hcmean::ArrayX<double>& a) { return {a.data(), a.data() + a.size()}; }

inline std::vector<int> flags(const hcmean::CensoredSample<double>& s) {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < s.size(); ++i) out.push_back(s.delta()[i] ? 1 : 0);
    return out;
}

inline hcmean::CensoredSample<double> make(std::vector<double> z, std::vector<int> delta) {
    std::vector<hcmean::ObservationRow> rows;
    for (std::size_t i = 0; i < z.size(); ++i) rows.push_back({z[i], delta[i]});
    return hcmean::load_sample(rows);
}

// Body sum plus product term divided by (1 - gamma1_hat), written out directly.
inline double combined_form(const hcmean::CensoredSample<double>& s, Eigen::Index k) {
    const Eigen::Index n = s.size();
    const Eigen::Index m = n - k;
    double product = 1.0;
    double body = 0.0;
    for (Eigen::Index i = 1; i <= m; ++i) {
        const double at_risk = static_cast<double>(n - i + 1);
        if (s.flag(i)) {
            body += product / at_risk * s.order_stat(i);
            product *= (at_risk - 1.0) / at_risk;
        }
    }
    double logs = 0.0;
    Eigen::Index events = 0;
    for (Eigen::Index i = 1; i <= k; ++i) {
        logs += std::log(s.order_stat(n - i + 1) / s.order_stat(m));
        events += s.flag(n - i + 1) ? 1 : 0;
    }
    const double g = (logs / static_cast<double>(k)) / (static_cast<double>(events) / static_cast<double>(k));
    return body + product * s.order_stat(m) / (1.0 - g);
}

}  // namespace testing
