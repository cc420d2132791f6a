#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jb/finite_dist.hpp"
#include "jb/moments.hpp"
#include "jb/quantile_table.hpp"

namespace jb {

/// q(p, N) = q_inf + sum_k beta_k N^-k for one (kind, p).
struct SurfaceFit {
    StatisticKind kind = StatisticKind::LM;
    double p = 0.0;
    int order = 0;
    double q_inf = 0.0;  ///< chi-square(2) quantile at p; fixed, not fitted
    std::vector<double> beta;

    // Diagnostics over the points used.
    double rms_residual = 0.0;
    double max_residual = 0.0;
    std::int64_t n_min = 0;
    std::int64_t n_max = 0;
    std::size_t points = 0;
    bool weighted = false;

    friend bool operator==(const SurfaceFit&, const SurfaceFit&) = default;
};

struct SurfaceFitOptions {
    int order = 6;
    std::int64_t min_n = 0;  ///< drop columns with n < min_n
    bool weighted = false;   ///< weight by inverse squared MC standard error
};

/**
 * Least squares of q(p, n_j) - q_inf on n_j^-1 .. n_j^-K with no free
 * intercept. Columns are scaled to unit norm and solved by column-pivoted
 * Householder QR. Throws InvalidArgument when p is not on the grid or
 * K > points - 1, NumericError("ill-conditioned fit; reduce K") on rank loss.
 */
[[nodiscard]] SurfaceFit fit_surface(const QuantileTable& table, StatisticKind kind, double p,
                                     const SurfaceFitOptions& options = {});

/// Same fit over explicit data; `weights` may be empty.
[[nodiscard]] SurfaceFit fit_surface(std::span<const std::int64_t> n, std::span<const double> q,
                                     std::span<const double> weights, StatisticKind kind, double p, int order);

/// q_inf + sum beta_k n^-k, floored at zero; q_inf for infinite n.
[[nodiscard]] double eval_surface(const SurfaceFit& fit, SampleSize n);

/// Header-style text; coefficients at 17 significant digits.
void save_fits(std::span<const SurfaceFit> fits, std::ostream& out);
[[nodiscard]] std::vector<SurfaceFit> load_fits(std::istream& in);

}  // namespace jb
