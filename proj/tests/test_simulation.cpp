#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "jb/errors.hpp"
#include "jb/simulation.hpp"

using namespace jb;

namespace {

SimConfig small_config(std::uint64_t r = 20'000) {
    SimConfig cfg;
    cfg.n_grid = {10, 25, 60};
    cfg.p_grid = {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975, 0.99, 0.999};
    cfg.replications = r;
    cfg.seed = 42;
    cfg.chunk_size = 3'000;  // last chunk is partial
    return cfg;
}

}  // namespace

TEST_CASE("empirical quantile: order-statistic interpolation") {
    CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4, 5}, 0.5) == 3.0);
    CHECK(empirical_quantile(std::vector<double>{10, 20}, 0.75) == 17.5);
    for (double p : {0.001, 0.3, 0.999}) CHECK(empirical_quantile(std::vector<double>{4.25}, p) == 4.25);
    CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4, 5}, 0.0) == 1.0);
    CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4, 5}, 1.0) == 5.0);
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), InvalidArgument);
}

TEST_CASE("OpenMP kernel matches the serial reference bit for bit") {
    for (Generator g : {Generator::CounterDefault, Generator::Mlfg1279}) {
        CAPTURE(to_string(g));
        const auto ref = reference::simulate_shapes(17, 7'777, 3, g, 1'000);
        for (int workers : {1, 2, 3, 8}) {
            RunOptions opts;
            opts.workers = workers;
            const auto par = simulate_shapes(17, 7'777, 3, g, 1'000, opts);
            CHECK(par.skewness == ref.skewness);
            CHECK(par.kurtosis == ref.kurtosis);
        }
    }
    auto cfg = small_config();
    const auto ref_table = reference::simulate_null(cfg);
    RunOptions opts;
    opts.workers = 4;
    CHECK(simulate_null(cfg, opts) == ref_table);
}

TEST_CASE("simulate_null is independent of worker count") {
    SimConfig cfg;
    cfg.n_grid = {10};
    cfg.p_grid = {0.5, 0.9, 0.95, 0.99, 0.999};
    cfg.replications = 1'000'000;
    cfg.seed = 42;
    RunOptions one, eight;
    one.workers = 1;
    eight.workers = 8;
    CHECK(simulate_null(cfg, one) == simulate_null(cfg, eight));
}

TEST_CASE("a column does not depend on the rest of the grid") {
    auto cfg = small_config();
    auto solo = cfg;
    solo.n_grid = {25};
    const auto full = simulate_null(cfg);
    const auto one = simulate_null(solo);
    for (StatisticKind kind : kAllKinds) {
        const auto a = full.column(kind, 1);
        const auto b = one.column(kind, 0);
        CHECK(std::vector<double>(a.begin(), a.end()) == std::vector<double>(b.begin(), b.end()));
    }
}

TEST_CASE("LM and ALM are computed from the same sample") {
    // Replay chunk 1 of n = 12 and recompute both statistics through the public API.
    const std::int64_t n = 12;
    const std::uint64_t chunk = 500;
    const auto draws = simulate_shapes(n, 1'500, 8, Generator::CounterDefault, chunk);
    Stream stream({8, stream_index_for(n, 1), Generator::CounterDefault});
    const auto c = finite_constants(n);
    std::vector<double> sample(n);
    for (std::uint64_t r = chunk; r < 2 * chunk; ++r) {
        for (auto& x : sample) x = stream.next_normal();
        const double lm = lm_from_shape(n, draws.skewness[r], draws.kurtosis[r]);
        const double alm = alm_from_shape(c, draws.skewness[r], draws.kurtosis[r]);
        REQUIRE(lm == doctest::Approx(lm_statistic(sample)).epsilon(1e-12));
        REQUIRE(alm == doctest::Approx(alm_statistic(sample)).epsilon(1e-12));
    }
}

TEST_CASE("quantile columns increase in p and are nonnegative") {
    const auto t = simulate_null(small_config());
    for (StatisticKind kind : kAllKinds) {
        for (std::size_t j = 0; j < t.n_count(); ++j) {
            const auto col = t.column(kind, j);
            CHECK(col[0] >= 0.0);
            for (std::size_t i = 1; i < col.size(); ++i) CHECK(col[i] > col[i - 1]);
            for (std::size_t i = 0; i < col.size(); ++i) CHECK(t.std_error(kind, i, j) > 0.0);
        }
    }
    CHECK_NOTHROW(validate_table(t));
}

TEST_CASE("moment diagnostics agree with the exact finite-sample constants") {
    SUBCASE("n = 10, R = 1e6") {
        const auto d = moment_diagnostics(10, 1'000'000, 42);
        CHECK(std::fabs(d.mean_b2 - 27.0 / 11.0) < 4.0 * std::sqrt(d.expected.c3 / 1e6));
        CHECK(std::fabs(d.z_mean_b2) < 4.0);
        CHECK(std::fabs(d.z_var_b2) < 4.0);
        CHECK(std::fabs(d.z_var_sqrt_b1) < 4.0);
        CHECK(d.expected.c1 == doctest::Approx(0.33566).epsilon(1e-4));
    }
    SUBCASE("n = 4, R = 1e5") {
        const auto d = moment_diagnostics(4, 100'000, 7);
        CHECK(d.expected.c3 == doctest::Approx(192.0 / 1575.0));
        CHECK(std::fabs(d.z_var_b2) < 4.0);
    }
    SUBCASE("lagged Fibonacci generator") {
        const auto d = moment_diagnostics(15, 300'000, 5, Generator::Mlfg1279);
        CHECK(std::fabs(d.z_mean_b2) < 4.0);
        CHECK(std::fabs(d.z_var_b2) < 4.0);
        CHECK(std::fabs(d.z_var_sqrt_b1) < 4.0);
    }
}

TEST_CASE("ALM quantiles move toward the chi-square(2) limit as n grows") {
    SimConfig cfg;
    cfg.n_grid = {10, 1000};
    cfg.p_grid = {0.9, 0.95, 0.99};
    cfg.replications = 100'000;
    cfg.seed = 3;
    const auto t = simulate_null(cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        const double limit = chi2_quantile_2df(cfg.p_grid[i]);
        CHECK(std::fabs(t.quantile(StatisticKind::ALM, i, 1) - limit) <
              std::fabs(t.quantile(StatisticKind::ALM, i, 0) - limit));
    }
}

TEST_CASE("progress reaches the campaign total") {
    auto cfg = small_config(5'000);
    std::uint64_t last = 0, total = 0;
    RunOptions opts;
    opts.progress = [&](std::uint64_t done, std::uint64_t all) {
        last = std::max(last, done);
        total = all;
    };
    (void)simulate_campaign(cfg, opts);
    CHECK(total == 15'000);
    CHECK(last == total);
}

TEST_CASE("configuration errors") {
    auto cfg = small_config();
    cfg.n_grid = {3, 10};
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("N < 4"), InvalidArgument);
    cfg = small_config();
    cfg.n_grid = {20, 10};
    CHECK_THROWS_AS(validate_config(cfg), InvalidArgument);
    cfg = small_config();
    cfg.p_grid = {0.5, 0.9, 0.99};
    CHECK_THROWS_AS(validate_config(cfg), InvalidArgument);
    cfg = small_config();
    cfg.p_grid.push_back(1.0);
    CHECK_THROWS_AS(validate_config(cfg), InvalidArgument);
    cfg = small_config(999);
    CHECK_THROWS_AS(validate_config(cfg), InvalidArgument);
    CHECK_THROWS_AS(simulate_shapes(3, 100, 1, Generator::CounterDefault, 10), InvalidArgument);
}

TEST_CASE("default grids") {
    const auto p = default_p_grid();
    CHECK(p.size() == 2001);
    CHECK(p.front() == 0.0001);
    CHECK(p.back() == 0.9999);
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] > p[i - 1]);
    for (double level : {0.90, 0.95, 0.99}) CHECK(std::find(p.begin(), p.end(), level) != p.end());
    const auto n = default_n_grid();
    CHECK(n.front() == 10);
    CHECK(n.back() == 10000);
    CHECK_NOTHROW(validate_config(paper_preset()));
    CHECK_NOTHROW(validate_config(quick_preset()));
    CHECK(quick_preset().n_grid.size() == 5);
}
