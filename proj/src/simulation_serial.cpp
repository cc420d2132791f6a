#include <cmath>
#include <optional>

#include "jb/errors.hpp"
#include "jb/simulation.hpp"

namespace jb::reference {

ShapeDraws simulate_shapes(std::int64_t n, std::uint64_t replications, std::uint64_t seed, Generator generator,
                           std::uint64_t chunk_size) {
    if (n < 4) throw InvalidArgument("sample size N < 4 is not supported");
    if (chunk_size == 0) throw InvalidArgument("chunk size must be positive");
    ShapeDraws out;
    out.n = n;
    std::optional<Stream> stream;
    std::vector<double> sample;
    for (std::uint64_t r = 0; r < replications; ++r) {
        if (r % chunk_size == 0) stream.emplace(StreamSpec{seed, stream_index_for(n, r / chunk_size), generator});
        sample.clear();
        for (std::int64_t i = 0; i < n; ++i) sample.push_back(stream->next_normal());
        const auto m = accumulate_moments(sample);
        out.skewness.push_back(m.m3 / std::pow(m.m2, 1.5));
        out.kurtosis.push_back(m.m4 / (m.m2 * m.m2));
    }
    return out;
}

QuantileTable simulate_null(const SimConfig& cfg) {
    validate_config(cfg);
    QuantileTable table(cfg);
    for (std::size_t j = 0; j < cfg.n_grid.size(); ++j) {
        fill_table_column(table, j, reference::simulate_shapes(cfg.n_grid[j], cfg.replications, cfg.seed, cfg.generator,
                                                    cfg.chunk_size));
    }
    return table;
}

}  // namespace jb::reference
