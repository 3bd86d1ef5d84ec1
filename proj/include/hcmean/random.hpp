#pragma once

#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace hcmean {

namespace detail {

// Stafford variant 13 finalizer (the SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Odd increment with enough bit transitions, as in SplittableRandom.
constexpr std::uint64_t mix_gamma(std::uint64_t x) noexcept {
    x = (x ^ (x >> 33)) * 0xff51afd7ed558ccdULL;
    x = (x ^ (x >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    x = (x ^ (x >> 33)) | 1ULL;
    const auto transitions = __builtin_popcountll(x ^ (x >> 1));
    return transitions < 24 ? x ^ 0xaaaaaaaaaaaaaaaaULL : x;
}

}  // namespace detail

/// Counter-based random stream.
///
/// The i-th output is a pure function of (key, gamma, i), so a stream is
/// fully determined by the identifiers it was derived from. Child streams
/// are keyed by (parent key, index) and never depend on how many values the
/// parent has already produced, which keeps parallel schedules reproducible.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit constexpr Stream(std::uint64_t seed) noexcept
        : key_(detail::mix64(seed + 0x9e3779b97f4a7c15ULL)),
          gamma_(detail::mix_gamma(seed ^ 0x6a09e667f3bcc909ULL)) {}

    /// Stream keyed by a seed and a path of indices, e.g. (seed, cell, replicate).
    static constexpr Stream keyed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
        Stream s(seed);
        for (auto index : path) s = s.child(index);
        return s;
    }

    [[nodiscard]] constexpr Stream child(std::uint64_t index) const noexcept {
        return Stream(detail::mix64(key_ ^ detail::mix64(index + gamma_)) ^ index);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return detail::mix64(key_ + counter_ * gamma_);
    }

    /// Uniform draw on the open interval (0, 1).
    constexpr double uniform01() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform index in [0, bound) by Lemire's multiply-shift rejection.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        auto product = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    [[nodiscard]] constexpr std::uint64_t position() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t gamma_;
    std::uint64_t counter_ = 0;
};

/// Anything that yields uniform (0,1) draws; Stream is the production model.
template <typename Source>
concept UniformSource = requires(Source& s) {
    { s.uniform01() } -> std::convertible_to<double>;
};

/// Anything that yields uniform indices; used by the bootstrap resampler.
template <typename Source>
concept IndexSource = requires(Source& s, std::uint64_t bound) {
    { s.below(bound) } -> std::convertible_to<std::uint64_t>;
};

}  // namespace hcmean
