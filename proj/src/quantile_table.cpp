#include "jb/quantile_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jb/errors.hpp"

namespace jb {

void validate_config(const SimConfig& cfg, bool for_simulation) {
    if (cfg.n_grid.empty()) throw InvalidArgument("n grid is empty");
    if (cfg.p_grid.empty()) throw InvalidArgument("p grid is empty");
    for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
        if (cfg.n_grid[i] < 4) {
            throw InvalidArgument("sample size " + std::to_string(cfg.n_grid[i]) +
                                  " in n grid: N < 4 is not supported");
        }
        if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
            throw InvalidArgument("n grid must be strictly ascending");
        }
    }
    for (std::size_t i = 0; i < cfg.p_grid.size(); ++i) {
        const double p = cfg.p_grid[i];
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p grid values must lie in (0, 1)");
        if (i > 0 && p <= cfg.p_grid[i - 1]) throw InvalidArgument("p grid must be strictly ascending");
    }
    if (cfg.chunk_size == 0) throw InvalidArgument("chunk size must be positive");
    if (cfg.replications == 0) throw InvalidArgument("replications must be positive");
    if (!for_simulation) return;
    if (cfg.replications < 1000) throw InvalidArgument("replications must be at least 1000");
    for (double level : {0.90, 0.95, 0.99}) {
        if (!std::binary_search(cfg.p_grid.begin(), cfg.p_grid.end(), level)) {
            throw InvalidArgument("p grid must contain 0.90, 0.95 and 0.99");
        }
    }
}

std::vector<std::int64_t> default_n_grid() {
    return {10, 15, 20, 25, 30, 40, 50, 75, 100, 150, 200, 300, 400, 500, 800, 1000, 2000, 5000, 10000};
}

std::vector<double> default_p_grid() {
    std::vector<double> p;
    p.reserve(2001);
    p.push_back(0.0001);
    for (int k = 1; k <= 1999; ++k) p.push_back(k / 2000.0);
    p.push_back(0.9999);
    return p;
}

SimConfig paper_preset() {
    SimConfig cfg;
    cfg.n_grid = default_n_grid();
    cfg.p_grid = default_p_grid();
    cfg.replications = 1'000'000;
    return cfg;
}

SimConfig quick_preset() {
    SimConfig cfg;
    cfg.n_grid = {10, 20, 50, 100, 500};
    cfg.p_grid = default_p_grid();
    cfg.replications = 100'000;
    return cfg;
}

QuantileTable::QuantileTable(SimConfig config) : config_(std::move(config)) {
    const std::size_t size = config_.n_grid.size() * config_.p_grid.size();
    for (auto& q : quantiles_) q.assign(size, 0.0);
    for (auto& s : std_errors_) s.assign(size, 0.0);
}

std::size_t QuantileTable::find_p(double p) const {
    const auto it = std::lower_bound(config_.p_grid.begin(), config_.p_grid.end(), p);
    return it != config_.p_grid.end() && *it == p ? static_cast<std::size_t>(it - config_.p_grid.begin())
                                                  : npos;
}

std::size_t QuantileTable::find_n(std::int64_t n) const {
    const auto it = std::lower_bound(config_.n_grid.begin(), config_.n_grid.end(), n);
    return it != config_.n_grid.end() && *it == n ? static_cast<std::size_t>(it - config_.n_grid.begin())
                                                  : npos;
}

void validate_table(const QuantileTable& table) {
    try {
        validate_config(table.config(), false);
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("invalid table: ") + e.what());
    }
    for (StatisticKind kind : kAllKinds) {
        for (std::size_t j = 0; j < table.n_count(); ++j) {
            const auto col = table.column(kind, j);
            for (std::size_t i = 0; i < col.size(); ++i) {
                if (!std::isfinite(col[i]) || col[i] < 0.0) {
                    throw DataError("invalid table: negative or non-finite quantile");
                }
                if (i > 0 && col[i] < col[i - 1]) {
                    throw DataError("invalid table: " + std::string(to_string(kind)) +
                                    " quantiles decrease in p at n=" + std::to_string(table.n_grid()[j]));
                }
            }
        }
    }
}

}  // namespace jb
