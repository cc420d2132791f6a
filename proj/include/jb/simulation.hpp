#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "jb/moments.hpp"
#include "jb/quantile_table.hpp"
#include "jb/rng.hpp"

namespace jb {

/// Per-replication skewness sqrt(b1) and kurtosis b2 of R null samples of size n.
struct ShapeDraws {
    std::int64_t n = 0;
    std::vector<double> skewness;
    std::vector<double> kurtosis;
};

/// Monte Carlo estimates of the shape moments against their exact values.
struct MomentDiagnostics {
    std::int64_t n = 0;
    std::uint64_t replications = 0;
    double mean_b2 = 0.0;
    double var_b2 = 0.0;
    double var_sqrt_b1 = 0.0;
    FiniteSampleConstants expected;
    double se_mean_b2 = 0.0;      ///< sqrt(c3 / R)
    double se_var_b2 = 0.0;       ///< sqrt((mu4 - var^2) / R), from the draws
    double se_var_sqrt_b1 = 0.0;  ///< same, for sqrt(b1)
    double z_mean_b2 = 0.0;
    double z_var_b2 = 0.0;
    double z_var_sqrt_b1 = 0.0;
};

/// Called with (replications done, replications total) across the whole campaign.
using ProgressHook = std::function<void(std::uint64_t, std::uint64_t)>;

struct RunOptions {
    int workers = 0;  ///< 0 uses the OpenMP default; never affects results.
    ProgressHook progress;
};

struct Campaign {
    QuantileTable table;
    std::vector<MomentDiagnostics> diagnostics;  ///< one per n in the grid
};

/// Stream used by chunk `chunk` of the column for sample size n.
/// Replication r of that column lives in chunk r / chunk_size and takes the
/// (r % chunk_size)-th block of n consecutive normals from that stream.
[[nodiscard]] constexpr std::uint64_t stream_index_for(std::int64_t n, std::uint64_t chunk) {
    return (static_cast<std::uint64_t>(n) << 32) | chunk;
}

/**
 * Simulates the null distributions of LM and ALM over the config grids.
 *
 * Both statistics are computed from the same simulated sample in every
 * replication. Each column needs one O(R) vector per statistic; R = 10^7
 * therefore costs about 320 MB at peak. The result is bit-identical for any
 * worker count.
 */
[[nodiscard]] Campaign simulate_campaign(const SimConfig& cfg, const RunOptions& options = {});
[[nodiscard]] QuantileTable simulate_null(const SimConfig& cfg, const RunOptions& options = {});

/// Parallel shape kernel; chunks are spread over OpenMP threads.
[[nodiscard]] ShapeDraws simulate_shapes(std::int64_t n, std::uint64_t replications, std::uint64_t seed,
                                         Generator generator, std::uint64_t chunk_size,
                                         const RunOptions& options = {});

[[nodiscard]] MomentDiagnostics moment_diagnostics(std::int64_t n, std::uint64_t replications,
                                                   std::uint64_t seed,
                                                   Generator generator = Generator::CounterDefault,
                                                   std::uint64_t chunk_size = 10'000, int workers = 0);

/// Diagnostics from existing draws.
[[nodiscard]] MomentDiagnostics summarize_shapes(const ShapeDraws& draws);

/// Linear interpolation between order statistics at h = (R - 1) p.
/// Throws InvalidArgument on an empty list or p outside [0, 1].
[[nodiscard]] double empirical_quantile(std::span<const double> sorted_values, double p);

/// Quantile standard error from the spacing of order statistics around p.
[[nodiscard]] double quantile_std_error(std::span<const double> sorted_values, double p);

namespace reference {

// Single-threaded reference implementations: replication-major loops with no
// chunk buffers. Kept for testing the OpenMP kernels, which must match them
// bit for bit.
[[nodiscard]] ShapeDraws simulate_shapes(std::int64_t n, std::uint64_t replications, std::uint64_t seed,
                                         Generator generator, std::uint64_t chunk_size);
[[nodiscard]] QuantileTable simulate_null(const SimConfig& cfg);

}  // namespace reference

/// Sorts LM/ALM values derived from draws and fills column n_index of the table.
void fill_table_column(QuantileTable& table, std::size_t n_index, const ShapeDraws& draws);

}  // namespace jb
