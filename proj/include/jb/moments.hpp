#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace jb {

/// Which omnibus statistic a table, fit or p-value refers to.
enum class StatisticKind { LM, ALM };

inline constexpr StatisticKind kAllKinds[] = {StatisticKind::LM, StatisticKind::ALM};

[[nodiscard]] std::string_view to_string(StatisticKind kind);

/// Parses "LM" or "ALM" (case-insensitive). Throws InvalidArgument otherwise.
[[nodiscard]] StatisticKind parse_kind(std::string_view text);

[[nodiscard]] constexpr std::size_t index_of(StatisticKind kind) {
    return kind == StatisticKind::LM ? 0 : 1;
}

/**
 * Mean and central moments m2, m3, m4 of a sample, all with divisor N.
 *
 * Produced by accumulate_moments() over the values in the order given: one
 * compensated pass for the mean, then one compensated pass for the powered
 * deviations. Each pass runs four TwoSum accumulators (element i feeds lane
 * i % 4) that are merged in lane order with Neumaier summation.
 */
struct CentralMoments {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};

/// Order-dependent accumulation used by the Monte Carlo kernel.
/// The public statistics below sort first and then call this.
[[nodiscard]] CentralMoments accumulate_moments(std::span<const double> values);

/// m_i = (1/N) * sum (x_j - mean)^i. Throws InvalidArgument("empty sample").
[[nodiscard]] double central_moment(std::span<const double> sample, int order);

// The statistics below are evaluated over an ascending-sorted copy of the
// sample, which makes them bit-identical under any permutation of the input.
// They throw InvalidArgument("degenerate sample") when m2 == 0 and
// InvalidArgument("empty sample") / ("sample too small") for n < 2.

/// Sample skewness sqrt(b1) = m3 / m2^(3/2).
[[nodiscard]] double skewness(std::span<const double> sample);

/// Sample kurtosis b2 = m4 / m2^2 (not excess kurtosis).
[[nodiscard]] double kurtosis(std::span<const double> sample);

/// Jarque-Bera Lagrange multiplier statistic N (sqrt(b1)^2/6 + (b2-3)^2/24).
[[nodiscard]] double lm_statistic(std::span<const double> sample);

/// Exact finite-sample mean and variances of skewness and kurtosis under
/// normality: c1 = var(sqrt(b1)), c2 = E(b2), c3 = var(b2).
struct FiniteSampleConstants {
    std::int64_t n = 0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

/// Throws InvalidArgument("ALM undefined for N < 4") when n < 4 (c3 vanishes at N = 3).
[[nodiscard]] FiniteSampleConstants finite_constants(std::int64_t n);

/// Adjusted statistic sqrt(b1)^2/c1 + (b2-c2)^2/c3. Requires n >= 4.
///
/// c1 and c3 are the unscaled variances (both O(1/N)), so no extra factor of
/// N appears; the statistic then shares the chi-square(2) limit with LM.
[[nodiscard]] double alm_statistic(std::span<const double> sample);

/// LM from precomputed shape statistics.
[[nodiscard]] inline double lm_from_shape(std::int64_t n, double skew, double kurt) {
    const double excess = kurt - 3.0;
    return static_cast<double>(n) * (skew * skew / 6.0 + excess * excess / 24.0);
}

/// ALM from precomputed shape statistics.
[[nodiscard]] inline double alm_from_shape(const FiniteSampleConstants& c, double skew,
                                           double kurt) {
    const double centred = kurt - c.c2;
    return skew * skew / c.c1 + centred * centred / c.c3;
}

/// chi-square(2) distribution function 1 - exp(-x/2). Requires x >= 0.
[[nodiscard]] double chi2_cdf_2df(double x);

/// chi-square(2) upper tail exp(-x/2). Requires x >= 0.
[[nodiscard]] double chi2_survival_2df(double x);

/// Inverse of chi2_cdf_2df: -2 ln(1 - p). Requires 0 <= p < 1.
[[nodiscard]] double chi2_quantile_2df(double p);

}  // namespace jb
