#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jb/moments.hpp"
#include "jb/rng.hpp"

namespace jb {

/// Parameters of one Monte Carlo campaign.
struct SimConfig {
    std::vector<std::int64_t> n_grid;
    std::vector<double> p_grid;
    std::uint64_t replications = 1'000'000;
    std::uint64_t seed = 0;
    Generator generator = Generator::CounterDefault;
    std::uint64_t chunk_size = 10'000;
};

/// Throws InvalidArgument naming the first violated constraint. Simulation
/// additionally requires 0.90, 0.95 and 0.99 in the p grid and R >= 1000.
void validate_config(const SimConfig& cfg, bool for_simulation = true);

[[nodiscard]] std::vector<std::int64_t> default_n_grid();

/// Uniform 0.0005 steps on [0.0005, 0.9995] plus the tail anchors 0.0001 and 0.9999.
[[nodiscard]] std::vector<double> default_p_grid();

/// The full grids at R = 10^6.
[[nodiscard]] SimConfig paper_preset();

/// Five sample sizes at R = 10^5, for CI.
[[nodiscard]] SimConfig quick_preset();

inline constexpr int kFormatVersion = 1;

/**
 * Null-distribution quantiles of LM and ALM.
 *
 * Values are stored column-major: one contiguous column of |p_grid|
 * quantiles per sample size, so a column for fixed n can be searched
 * directly.
 */
class QuantileTable {
public:
    QuantileTable() = default;
    explicit QuantileTable(SimConfig config);

    [[nodiscard]] const SimConfig& config() const { return config_; }
    [[nodiscard]] std::span<const std::int64_t> n_grid() const { return config_.n_grid; }
    [[nodiscard]] std::span<const double> p_grid() const { return config_.p_grid; }
    [[nodiscard]] std::size_t n_count() const { return config_.n_grid.size(); }
    [[nodiscard]] std::size_t p_count() const { return config_.p_grid.size(); }

    [[nodiscard]] double quantile(StatisticKind kind, std::size_t p_index, std::size_t n_index) const {
        return quantiles_[index_of(kind)][n_index * p_count() + p_index];
    }
    double& quantile(StatisticKind kind, std::size_t p_index, std::size_t n_index) {
        return quantiles_[index_of(kind)][n_index * p_count() + p_index];
    }
    [[nodiscard]] double std_error(StatisticKind kind, std::size_t p_index, std::size_t n_index) const {
        return std_errors_[index_of(kind)][n_index * p_count() + p_index];
    }
    double& std_error(StatisticKind kind, std::size_t p_index, std::size_t n_index) {
        return std_errors_[index_of(kind)][n_index * p_count() + p_index];
    }

    /// Quantiles for one sample size, ascending in p.
    [[nodiscard]] std::span<const double> column(StatisticKind kind, std::size_t n_index) const {
        return std::span<const double>(quantiles_[index_of(kind)]).subspan(n_index * p_count(), p_count());
    }
    [[nodiscard]] std::span<double> column(StatisticKind kind, std::size_t n_index) {
        return std::span<double>(quantiles_[index_of(kind)]).subspan(n_index * p_count(), p_count());
    }
    [[nodiscard]] std::span<double> std_error_column(StatisticKind kind, std::size_t n_index) {
        return std::span<double>(std_errors_[index_of(kind)]).subspan(n_index * p_count(), p_count());
    }

    /// Index of an exact grid value, or npos.
    [[nodiscard]] std::size_t find_p(double p) const;
    [[nodiscard]] std::size_t find_n(std::int64_t n) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const QuantileTable&, const QuantileTable&) = default;

private:
    SimConfig config_;
    std::array<std::vector<double>, 2> quantiles_;
    std::array<std::vector<double>, 2> std_errors_;
};

inline bool operator==(const SimConfig& a, const SimConfig& b) {
    return a.n_grid == b.n_grid && a.p_grid == b.p_grid && a.replications == b.replications &&
           a.seed == b.seed && a.generator == b.generator && a.chunk_size == b.chunk_size;
}

/// Checks grids, nonnegativity and monotonicity in p of every column.
/// Throws DataError("invalid table: ...").
void validate_table(const QuantileTable& table);

}  // namespace jb
