#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "jb/moments.hpp"
#include "jb/quantile_table.hpp"

namespace jb {

/// A sample size, or the asymptotic limit.
class SampleSize {
public:
    static constexpr SampleSize infinite() { return SampleSize(-1); }
    static constexpr SampleSize finite(std::int64_t n) { return SampleSize(n); }

    [[nodiscard]] constexpr bool is_infinite() const { return n_ < 0; }
    [[nodiscard]] constexpr std::int64_t value() const { return n_; }

private:
    constexpr explicit SampleSize(std::int64_t n) : n_(n) {}
    std::int64_t n_;
};

/// A probability, or NA when the point lies beyond the table's resolution.
struct PValueResult {
    std::optional<double> value;
    double resolution_bound = 0.0;  ///< 1 - max(p_grid); 0 for the closed form

    [[nodiscard]] bool available() const { return value.has_value(); }
};

/**
 * Finite-sample distribution function P(S <= q) of LM or ALM.
 *
 * Inside a table column the stored (p, q) knots are mapped to
 * u = -ln(1 - p), w = ln q and u is interpolated linearly in w; between
 * columns u is interpolated linearly in ln n, and above the largest tabulated
 * n it is blended linearly in 1/n towards the chi-square(2) value q/2.
 * At a knot of a tabulated n the stored p is returned unchanged.
 *
 * Returns NA when q exceeds the largest quantile of a column used. Below the
 * smallest quantile, p = p_min * q / q_min. Throws InvalidArgument for q < 0
 * or n below the table range. For infinite n the table is not consulted.
 */
[[nodiscard]] PValueResult pjb(double q, SampleSize n, StatisticKind kind, const QuantileTable& table);
[[nodiscard]] PValueResult pjb(double q, SampleSize n, StatisticKind kind);

/**
 * Finite-sample quantile function; the inverse of pjb under the same
 * coordinates, with w interpolated linearly in u and then in ln n.
 * Throws InvalidArgument("quantile outside tabulated range") when p is
 * outside [min p_grid, max p_grid] for finite n.
 */
[[nodiscard]] double qjb(double p, SampleSize n, StatisticKind kind, const QuantileTable& table);
[[nodiscard]] double qjb(double p, SampleSize n, StatisticKind kind);

struct TestResult {
    std::int64_t n = 0;
    double lm = 0.0;
    double alm = 0.0;
    PValueResult p_lm;   ///< upper-tail finite-sample p-value
    PValueResult p_alm;
    double p_asymptotic = 0.0;  ///< exp(-lm / 2)
};

/// Both statistics with their upper-tail p-values. Without a table, or when
/// n is below the table range, the finite-sample p-values are NA.
[[nodiscard]] TestResult jb_test(std::span<const double> sample, const QuantileTable& table);
[[nodiscard]] TestResult jb_test(std::span<const double> sample);

}  // namespace jb
