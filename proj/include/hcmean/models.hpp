#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "hcmean/error.hpp"
#include "hcmean/random.hpp"

namespace hcmean {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

enum class Family { Pareto, Frechet, Burr };

[[nodiscard]] inline std::string_view to_string(Family family) noexcept {
    switch (family) {
        case Family::Pareto: return "pareto";
        case Family::Frechet: return "frechet";
        case Family::Burr: return "burr";
    }
    return "unknown";
}

[[nodiscard]] inline Family parse_family(std::string_view name) {
    if (name == "pareto" || name == "Pareto") return Family::Pareto;
    if (name == "frechet" || name == "Frechet") return Family::Frechet;
    if (name == "burr" || name == "Burr") return Family::Burr;
    throw DomainError("unknown family '" + std::string(name) + "'");
}

/// One heavy-tailed marginal. All three families have tail index `gamma`:
///
///   Pareto   survival(x) = x^(-1/gamma),                    x >= 1
///   Frechet  survival(x) = 1 - exp(-x^(-1/gamma)),          x >= 0
///   Burr     survival(x) = (1 + x^(1/eta))^(-eta/gamma),    x >= 0
template <typename Scalar = double>
struct ModelSpec {
    Family family = Family::Frechet;
    Scalar gamma = Scalar(0.3);
    Scalar eta = Scalar(0.25);

    static ModelSpec pareto(Scalar gamma) { return checked({Family::Pareto, gamma, Scalar(1)}); }
    static ModelSpec frechet(Scalar gamma) { return checked({Family::Frechet, gamma, Scalar(1)}); }
    static ModelSpec burr(Scalar gamma, Scalar eta) { return checked({Family::Burr, gamma, eta}); }

    static ModelSpec checked(ModelSpec spec) {
        if (!(spec.gamma > 0) || !std::isfinite(static_cast<double>(spec.gamma)))
            throw DomainError("tail index must be positive and finite");
        if (spec.family == Family::Burr && !(spec.eta > 0))
            throw DomainError("Burr shape eta must be positive");
        return spec;
    }

    [[nodiscard]] Scalar lower_support() const noexcept {
        return family == Family::Pareto ? Scalar(1) : Scalar(0);
    }
};

template <typename Scalar>
[[nodiscard]] Scalar survival(const ModelSpec<Scalar>& model, Scalar x) {
    using std::exp;
    using std::expm1;
    using std::log1p;
    using std::pow;
    if (!(x >= model.lower_support())) throw DomainError("survival: x below the support");
    switch (model.family) {
        case Family::Pareto:
            return pow(x, -Scalar(1) / model.gamma);
        case Family::Frechet:
            if (x == Scalar(0)) return Scalar(1);
            return -expm1(-pow(x, -Scalar(1) / model.gamma));
        case Family::Burr:
            return exp(-(model.eta / model.gamma) * log1p(pow(x, Scalar(1) / model.eta)));
    }
    return Scalar(0);
}

template <typename Scalar>
[[nodiscard]] Scalar cdf(const ModelSpec<Scalar>& model, Scalar x) {
    using std::exp;
    using std::pow;
    // Frechet cdf directly so that small values keep their relative precision.
    if (model.family == Family::Frechet && x > Scalar(0))
        return exp(-pow(x, -Scalar(1) / model.gamma));
    return Scalar(1) - survival(model, x);
}

/// Inverse of the cdf, K^{-1}(u) = inf{x : K(x) >= u}.
template <typename Scalar>
[[nodiscard]] Scalar quantile(const ModelSpec<Scalar>& model, Scalar u) {
    using std::exp;
    using std::expm1;
    using std::log;
    using std::log1p;
    using std::pow;
    if (!(u > Scalar(0) && u < Scalar(1))) throw DomainError("quantile: u must lie in (0,1)");
    switch (model.family) {
        case Family::Pareto:
            return exp(-model.gamma * log1p(-u));
        case Family::Frechet:
            return pow(-log(u), -model.gamma);
        case Family::Burr:
            return pow(expm1(-(model.gamma / model.eta) * log1p(-u)), model.eta);
    }
    return Scalar(0);
}

/// n i.i.d. draws by inverse transform.
template <typename Scalar, UniformSource Source>
[[nodiscard]] ArrayX<Scalar> sample(const ModelSpec<Scalar>& model, std::size_t n, Source& source) {
    if (n < 1) throw ShapeError("sample: n must be at least 1");
    ArrayX<Scalar> out(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = quantile(model, static_cast<Scalar>(source.uniform01()));
    return out;
}

/// Closed-form E[X]:
///   Pareto  1/(1-gamma)
///   Frechet Gamma(1-gamma)
///   Burr    eta * B(eta, eta/gamma - eta)
/// The Burr form follows from substituting u = x^(1/eta) in the survival integral.
template <typename Scalar>
[[nodiscard]] Scalar true_mean(const ModelSpec<Scalar>& model) {
    using std::exp;
    using std::lgamma;
    using std::tgamma;
    if (!(model.gamma < Scalar(1))) throw InfiniteMeanError("mean is infinite for tail index >= 1");
    switch (model.family) {
        case Family::Pareto:
            return Scalar(1) / (Scalar(1) - model.gamma);
        case Family::Frechet:
            return tgamma(Scalar(1) - model.gamma);
        case Family::Burr: {
            const Scalar a = model.eta;
            const Scalar b = model.eta / model.gamma - model.eta;
            return model.eta * exp(lgamma(a) + lgamma(b) - lgamma(a + b));
        }
    }
    return Scalar(0);
}

/// Tail indices of the variable of interest X (gamma1) and of the censor Y (gamma2).
template <typename Scalar = double>
struct CensoringDesign {
    Scalar gamma1;
    Scalar gamma2;
};

template <typename Scalar>
struct CensoringQuantities {
    Scalar p;      ///< asymptotic proportion of uncensored observations in the tail
    Scalar gamma;  ///< tail index of Z = min(X, Y)
};

template <typename Scalar>
[[nodiscard]] CensoringQuantities<Scalar> censoring_quantities(const CensoringDesign<Scalar>& design) {
    if (!(design.gamma1 > 0 && design.gamma2 > 0))
        throw DomainError("censoring_quantities: tail indices must be positive");
    const Scalar sum = design.gamma1 + design.gamma2;
    return {design.gamma2 / sum, design.gamma1 * design.gamma2 / sum};
}

/// Censor tail index that makes the tail-uncensored proportion equal p.
template <typename Scalar>
[[nodiscard]] Scalar gamma2_for(Scalar p, Scalar gamma1) {
    if (!(p > Scalar(0) && p < Scalar(1)))
        throw DegenerateDesignError("gamma2_for: p must lie strictly inside (0,1)");
    if (!(gamma1 > 0)) throw DomainError("gamma2_for: gamma1 must be positive");
    return p * gamma1 / (Scalar(1) - p);
}

/// False when (gamma1, gamma2) lies in the region gamma2/(1+2 gamma2) < gamma1 < 1
/// where the classical KM-mean CLT fails and a tail correction is required.
template <typename Scalar>
[[nodiscard]] bool stute_applicable(const CensoringDesign<Scalar>& design) {
    if (!(design.gamma1 < Scalar(1))) throw InfiniteMeanError("stute_applicable: gamma1 >= 1");
    if (!(design.gamma1 > 0 && design.gamma2 > 0))
        throw DomainError("stute_applicable: tail indices must be positive");
    return !(design.gamma2 / (Scalar(1) + Scalar(2) * design.gamma2) < design.gamma1);
}

template <typename Scalar>
struct ParetoPairTheory {
    Scalar survival_z;   ///< survival function of Z
    Scalar sub_censored; ///< P(Z <= x, delta = 0)
    Scalar sub_observed; ///< P(Z <= x, delta = 1)
    Scalar gamma0;       ///< exp of the integrated censored hazard
};

/// Closed forms for Pareto X and Pareto Y, both supported on [1, inf).
template <typename Scalar>
[[nodiscard]] ParetoPairTheory<Scalar> pareto_pair_theory(const CensoringDesign<Scalar>& design, Scalar x) {
    using std::expm1;
    using std::log;
    using std::pow;
    if (!(x >= Scalar(1))) throw DomainError("pareto_pair_theory: x must be >= 1");
    const auto q = censoring_quantities(design);
    const Scalar mass = -expm1(-log(x) / q.gamma);
    return {pow(x, -Scalar(1) / q.gamma), q.gamma * mass / design.gamma2, q.gamma * mass / design.gamma1,
            pow(x, Scalar(1) / design.gamma2)};
}

}  // namespace hcmean
