#include "jb/simulation.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "jb/errors.hpp"

namespace jb {
namespace {

void check_shape_args(std::int64_t n, std::uint64_t replications, std::uint64_t chunk_size) {
    if (n < 4) throw InvalidArgument("sample size N < 4 is not supported");
    if (replications == 0) throw InvalidArgument("replications must be positive");
    if (chunk_size == 0) throw InvalidArgument("chunk size must be positive");
    if (n > (std::int64_t{1} << 31)) throw InvalidArgument("sample size too large");
    if ((replications - 1) / chunk_size >= (std::uint64_t{1} << 32)) {
        throw InvalidArgument("too many chunks; raise the chunk size");
    }
}

// Runs `count` consecutive replications of one chunk from its private stream.
template <class Source>
void run_chunk(Source& source, std::span<double> buffer, double* skew, double* kurt, std::uint64_t count) {
    for (std::uint64_t r = 0; r < count; ++r) {
        for (double& x : buffer) x = source.next_normal();
        const CentralMoments m = accumulate_moments(buffer);
        skew[r] = m.m3 / std::pow(m.m2, 1.5);
        kurt[r] = m.m4 / (m.m2 * m.m2);
    }
}

// Ordered compensated sum, so the summaries do not depend on thread count.
struct Accumulator {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double t = sum + x;
        c += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + c; }
};

struct SpreadStats {
    double mean = 0.0;
    double variance = 0.0;
    double fourth = 0.0;
};

SpreadStats spread(std::span<const double> v) {
    Accumulator s;
    for (double x : v) s.add(x);
    const double n = static_cast<double>(v.size());
    SpreadStats out;
    out.mean = s.value() / n;
    Accumulator s2, s4;
    for (double x : v) {
        const double d = x - out.mean;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    out.variance = s2.value() / n;
    out.fourth = s4.value() / n;
    return out;
}

}  // namespace

ShapeDraws simulate_shapes(std::int64_t n, std::uint64_t replications, std::uint64_t seed, Generator generator,
                           std::uint64_t chunk_size, const RunOptions& options) {
    check_shape_args(n, replications, chunk_size);
    ShapeDraws out;
    out.n = n;
    out.skewness.resize(replications);
    out.kurtosis.resize(replications);

    const auto chunks = static_cast<std::int64_t>((replications + chunk_size - 1) / chunk_size);
    const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();
    std::atomic<std::uint64_t> done{0};

#pragma omp parallel num_threads(workers)
    {
        std::vector<double> buffer(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < chunks; ++c) {
            const auto chunk = static_cast<std::uint64_t>(c);
            const std::uint64_t first = chunk * chunk_size;
            const std::uint64_t count = std::min(chunk_size, replications - first);
            Stream stream({seed, stream_index_for(n, chunk), generator});
            stream.visit([&](auto& source) {
                run_chunk(source, buffer, out.skewness.data() + first, out.kurtosis.data() + first, count);
            });
            const std::uint64_t finished = done.fetch_add(count) + count;
            if (options.progress) {
#pragma omp critical(jb_progress)
                options.progress(finished, replications);
            }
        }
    }
    return out;
}

double empirical_quantile(std::span<const double> sorted_values, double p) {
    if (sorted_values.empty()) throw InvalidArgument("empty list");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0, 1]");
    const double h = static_cast<double>(sorted_values.size() - 1) * p;
    const double lower = std::floor(h);
    const auto i = static_cast<std::size_t>(lower);
    if (i + 1 >= sorted_values.size()) return sorted_values.back();
    const double frac = h - lower;
    return sorted_values[i] + frac * (sorted_values[i + 1] - sorted_values[i]);
}

double quantile_std_error(std::span<const double> sorted_values, double p) {
    const double r = static_cast<double>(sorted_values.size());
    const double step = std::sqrt(p * (1.0 - p) / r);
    const double lo = std::max(0.0, p - step);
    const double hi = std::min(1.0, p + step);
    if (!(hi > lo)) return 0.0;
    return (empirical_quantile(sorted_values, hi) - empirical_quantile(sorted_values, lo)) / (hi - lo) * step;
}

void fill_table_column(QuantileTable& table, std::size_t n_index, const ShapeDraws& draws) {
    const auto constants = finite_constants(draws.n);
    const std::size_t r = draws.skewness.size();
    std::vector<double> values(r);
    for (StatisticKind kind : kAllKinds) {
        for (std::size_t i = 0; i < r; ++i) {
            values[i] = kind == StatisticKind::LM ? lm_from_shape(draws.n, draws.skewness[i], draws.kurtosis[i])
                                                  : alm_from_shape(constants, draws.skewness[i], draws.kurtosis[i]);
        }
        std::sort(values.begin(), values.end());
        auto q = table.column(kind, n_index);
        auto se = table.std_error_column(kind, n_index);
        const auto p = table.p_grid();
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i] = empirical_quantile(values, p[i]);
            se[i] = quantile_std_error(values, p[i]);
        }
    }
}

MomentDiagnostics summarize_shapes(const ShapeDraws& draws) {
    MomentDiagnostics d;
    d.n = draws.n;
    d.replications = draws.kurtosis.size();
    d.expected = finite_constants(draws.n);
    const double r = static_cast<double>(d.replications);

    const auto b2 = spread(draws.kurtosis);
    const auto sb1 = spread(draws.skewness);
    d.mean_b2 = b2.mean;
    d.var_b2 = b2.variance;
    d.var_sqrt_b1 = sb1.variance;

    d.se_mean_b2 = std::sqrt(d.expected.c3 / r);
    d.se_var_b2 = std::sqrt(std::max(0.0, b2.fourth - b2.variance * b2.variance) / r);
    d.se_var_sqrt_b1 = std::sqrt(std::max(0.0, sb1.fourth - sb1.variance * sb1.variance) / r);
    d.z_mean_b2 = (d.mean_b2 - d.expected.c2) / d.se_mean_b2;
    d.z_var_b2 = (d.var_b2 - d.expected.c3) / d.se_var_b2;
    d.z_var_sqrt_b1 = (d.var_sqrt_b1 - d.expected.c1) / d.se_var_sqrt_b1;
    return d;
}

MomentDiagnostics moment_diagnostics(std::int64_t n, std::uint64_t replications, std::uint64_t seed,
                                     Generator generator, std::uint64_t chunk_size, int workers) {
    RunOptions options;
    options.workers = workers;
    return summarize_shapes(simulate_shapes(n, replications, seed, generator, chunk_size, options));
}

Campaign simulate_campaign(const SimConfig& cfg, const RunOptions& options) {
    validate_config(cfg);
    Campaign out{QuantileTable(cfg), {}};
    const std::uint64_t total = cfg.replications * cfg.n_grid.size();
    for (std::size_t j = 0; j < cfg.n_grid.size(); ++j) {
        RunOptions column_options;
        column_options.workers = options.workers;
        if (options.progress) {
            const std::uint64_t offset = cfg.replications * j;
            column_options.progress = [&options, offset, total](std::uint64_t done, std::uint64_t) {
                options.progress(offset + done, total);
            };
        }
        const auto draws =
            simulate_shapes(cfg.n_grid[j], cfg.replications, cfg.seed, cfg.generator, cfg.chunk_size, column_options);
        fill_table_column(out.table, j, draws);
        out.diagnostics.push_back(summarize_shapes(draws));
    }
    return out;
}

QuantileTable simulate_null(const SimConfig& cfg, const RunOptions& options) {
    return simulate_campaign(cfg, options).table;
}

}  // namespace jb
