#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hcmean/error.hpp"
#include "hcmean/models.hpp"

namespace hcmean {

using FlagArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Order statistics Z_{1:n} <= ... <= Z_{n:n} with their concomitant
/// censoring flags (true = uncensored, X <= Y). Immutable once built.
template <typename Scalar = double>
class CensoredSample {
public:
    /// Validates that z is nondecreasing, positive, and n >= 2.
    static CensoredSample from_sorted(ArrayX<Scalar> z, FlagArray delta) {
        if (z.size() != delta.size()) throw ShapeError("z and delta lengths differ");
        if (z.size() < 2) throw ShapeError("a censored sample needs at least 2 observations");
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            if (!(z[i] > Scalar(0))) throw DomainError("observations must be positive");
            if (i > 0 && z[i] < z[i - 1]) throw DomainError("observations must be sorted");
        }
        return CensoredSample(std::move(z), std::move(delta));
    }

    [[nodiscard]] Eigen::Index size() const noexcept { return z_.size(); }
    [[nodiscard]] const ArrayX<Scalar>& z() const noexcept { return z_; }
    [[nodiscard]] const FlagArray& delta() const noexcept { return delta_; }

    /// 1-based order statistic Z_{i:n}.
    [[nodiscard]] Scalar order_stat(Eigen::Index i) const { return z_[i - 1]; }
    /// 1-based concomitant delta_{[i:n]}.
    [[nodiscard]] bool flag(Eigen::Index i) const { return delta_[i - 1]; }

    [[nodiscard]] Eigen::Index uncensored_count() const { return delta_.count(); }

    /// c * Z with the same flags; c > 0 preserves the ordering.
    [[nodiscard]] CensoredSample scaled(Scalar c) const {
        if (!(c > Scalar(0))) throw DomainError("scale factor must be positive");
        return CensoredSample(z_ * c, delta_);
    }

private:
    CensoredSample(ArrayX<Scalar> z, FlagArray delta) : z_(std::move(z)), delta_(std::move(delta)) {}

    ArrayX<Scalar> z_;
    FlagArray delta_;
};

namespace detail {

template <typename Scalar>
CensoredSample<Scalar> stable_sorted(const ArrayX<Scalar>& z, const FlagArray& delta) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(z.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return z[a] < z[b]; });
    ArrayX<Scalar> zs(z.size());
    FlagArray ds(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        zs[i] = z[order[static_cast<std::size_t>(i)]];
        ds[i] = delta[order[static_cast<std::size_t>(i)]];
    }
    return CensoredSample<Scalar>::from_sorted(std::move(zs), std::move(ds));
}

}  // namespace detail

/// Z_j = min(X_j, Y_j), delta_j = 1{X_j <= Y_j}, stably sorted by Z.
template <typename Scalar>
[[nodiscard]] CensoredSample<Scalar> censor(const ArrayX<Scalar>& x, const ArrayX<Scalar>& y) {
    if (x.size() != y.size()) throw ShapeError("censor: x and y lengths differ");
    if (x.size() < 2) throw ShapeError("censor: need at least 2 pairs");
    if (!((x > Scalar(0)).all() && (y > Scalar(0)).all())) throw DomainError("censor: values must be positive");
    const FlagArray delta = x <= y;
    const ArrayX<Scalar> z = x.min(y);
    return detail::stable_sorted(z, delta);
}

struct ObservationRow {
    double z;
    int delta;
};

/// Builds a sample from (z, delta) rows in any order; errors carry 1-based row indices.
template <typename Scalar = double>
[[nodiscard]] CensoredSample<Scalar> load_sample(const std::vector<ObservationRow>& rows) {
    if (rows.size() < 2) throw ShapeError("load_sample: need at least 2 rows, got " + std::to_string(rows.size()));
    ArrayX<Scalar> z(static_cast<Eigen::Index>(rows.size()));
    FlagArray delta(z.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].delta != 0 && rows[r].delta != 1) throw ParseError(r + 1, "delta must be 0 or 1");
        if (!(rows[r].z > 0)) throw ParseError(r + 1, "z must be positive");
        z[static_cast<Eigen::Index>(r)] = static_cast<Scalar>(rows[r].z);
        delta[static_cast<Eigen::Index>(r)] = rows[r].delta == 1;
    }
    return detail::stable_sorted(z, delta);
}

/// Parses the `z,delta` CSV format (header required, any row order).
std::vector<ObservationRow> parse_rows_csv(std::istream& in);

/// Reads a `z,delta` CSV file into a sample.
CensoredSample<double> read_sample_csv(const std::string& path);

template <typename Scalar>
void write_sample_csv(std::ostream& out, const CensoredSample<Scalar>& s) {
    std::ostringstream line;
    line.precision(17);
    out << "z,delta\n";
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        line.str({});
        line << static_cast<double>(s.z()[i]) << ',' << (s.delta()[i] ? 1 : 0) << '\n';
        out << line.str();
    }
}

}  // namespace hcmean
