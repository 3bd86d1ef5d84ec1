#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Product-limit estimator from risk sets: S(t) = prod_{t_i <= t} (1 - d_i / r_i).
// Returns the mass F jumps by at each input position, in the given (sorted) order.
inline std::vector<double> km_jumps(const std::vector<double>& z, const std::vector<int>& delta) {
    const std::size_t n = z.size();
    std::vector<double> mass(n, 0.0);
    double surv = 1.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && z[j] == z[i]) ++j;
        std::size_t at_risk = 0;
        for (std::size_t a = 0; a < n; ++a)
            if (z[a] >= z[i]) ++at_risk;
        std::size_t events = 0;
        for (std::size_t a = i; a < j; ++a) events += delta[a];
        const double next = surv * (1.0 - static_cast<double>(events) / static_cast<double>(at_risk));
        // split the jump evenly over tied events
        for (std::size_t a = i; a < j; ++a)
            if (delta[a]) mass[a] = (surv - next) / static_cast<double>(events);
        surv = next;
        i = j;
    }
    return mass;
}

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson on a finite interval.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 60);
}

// E X = lower + int_lower^inf S(x) dx, with [1, inf) mapped to (0, 1] by x = 1/u.
inline double mean_from_survival(const std::function<double(double)>& survival, double lower) {
    double total = lower;
    if (lower < 1.0) total += integrate(survival, lower, 1.0);
    total += integrate(
        [&](double u) {
            if (u <= 0.0) return 0.0;
            return survival(1.0 / u) / (u * u);
        },
        0.0, 1.0);
    return total;
}

// One-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace oracle
