#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "jb/errors.hpp"
#include "jb/response_surface.hpp"
#include "jb/simulation.hpp"
#include "synthetic_table.hpp"

using namespace jb;

namespace {

// q_inf + 3/n - 5/n^2 for every (kind, p).
QuantileTable manufactured_table() {
    std::vector<std::int64_t> n;
    for (std::int64_t v : default_n_grid()) n.push_back(v);
    return testing::make_table(n, {0.5, 0.9, 0.95, 0.99}, [](StatisticKind, double p, std::int64_t nn) {
        const double inv = 1.0 / static_cast<double>(nn);
        return chi2_quantile_2df(p) + 3.0 * inv - 5.0 * inv * inv;
    });
}

}  // namespace

TEST_CASE("manufactured second-order surface is recovered") {
    const auto t = manufactured_table();
    for (StatisticKind kind : kAllKinds)
        for (double p : {0.5, 0.95, 0.99}) {
            SurfaceFitOptions opts;
            opts.order = 2;
            const auto fit = fit_surface(t, kind, p, opts);
            CHECK(fit.q_inf == chi2_quantile_2df(p));
            CHECK(std::fabs(fit.beta[0] - 3.0) < 1e-8);
            CHECK(std::fabs(fit.beta[1] + 5.0) < 1e-8);
            CHECK(fit.rms_residual < 1e-8);
            CHECK(fit.max_residual < 1e-8);
            CHECK(fit.n_min == 10);
            CHECK(fit.n_max == 10000);
            CHECK(fit.points == t.n_count());
        }
}

TEST_CASE("weighted and truncated fits of exact data") {
    const auto t = manufactured_table();
    SurfaceFitOptions opts;
    opts.order = 3;
    opts.weighted = true;
    opts.min_n = 20;
    const auto fit = fit_surface(t, StatisticKind::ALM, 0.9, opts);
    CHECK(fit.weighted);
    CHECK(fit.n_min == 20);
    CHECK(fit.points == t.n_count() - 2);
    CHECK(std::fabs(fit.beta[0] - 3.0) < 1e-7);
    CHECK(std::fabs(fit.beta[1] + 5.0) < 1e-5);
    CHECK(std::fabs(fit.beta[2]) < 1e-3);
}

TEST_CASE("zero signal gives zero coefficients") {
    const auto t = testing::make_table({10, 20, 50, 100, 200, 500, 1000, 5000}, {0.9, 0.95},
                                       [](StatisticKind, double p, std::int64_t) { return chi2_quantile_2df(p); });
    const auto fit = fit_surface(t, StatisticKind::LM, 0.95, {});
    REQUIRE(fit.beta.size() == 6);
    for (double b : fit.beta) CHECK(std::fabs(b) < 1e-10);
}

TEST_CASE("evaluation") {
    SurfaceFit fit;
    fit.p = 0.95;
    fit.q_inf = chi2_quantile_2df(0.95);
    fit.order = 2;
    fit.beta = {3.0, -5.0};
    CHECK(eval_surface(fit, SampleSize::finite(10)) == doctest::Approx(fit.q_inf + 0.3 - 0.05).epsilon(1e-15));
    CHECK(eval_surface(fit, SampleSize::infinite()) == fit.q_inf);
    fit.beta = {-100.0};
    CHECK(eval_surface(fit, SampleSize::finite(1)) == 0.0);
}

TEST_CASE("residual diagnostics match evaluation at the grid") {
    SimConfig cfg;
    cfg.n_grid = {10, 20, 40, 80, 160, 320};
    cfg.p_grid = {0.5, 0.9, 0.95, 0.99};
    cfg.replications = 20'000;
    cfg.seed = 17;
    const auto t = simulate_null(cfg);
    SurfaceFitOptions opts;
    opts.order = 3;
    const auto fit = fit_surface(t, StatisticKind::LM, 0.95, opts);
    double sum_sq = 0.0, worst = 0.0;
    for (std::size_t j = 0; j < t.n_count(); ++j) {
        const double r = t.quantile(StatisticKind::LM, 2, j) - eval_surface(fit, SampleSize::finite(t.n_grid()[j]));
        sum_sq += r * r;
        worst = std::max(worst, std::fabs(r));
    }
    CHECK(fit.rms_residual == doctest::Approx(std::sqrt(sum_sq / 6.0)).epsilon(1e-12));
    CHECK(fit.max_residual == doctest::Approx(worst).epsilon(1e-12));
}

TEST_CASE("refitting the fit's own predictions reproduces it") {
    const std::vector<std::int64_t> n = {10, 15, 20, 30, 50, 100, 200, 500, 1000, 10000};
    const std::vector<double> beta = {-2.5, 40.0, -300.0, 900.0};
    SurfaceFit truth;
    truth.q_inf = chi2_quantile_2df(0.9);
    truth.beta = beta;
    std::vector<double> q;
    for (auto v : n) q.push_back(eval_surface(truth, SampleSize::finite(v)));
    const auto first = fit_surface(n, q, {}, StatisticKind::LM, 0.9, 4);
    std::vector<double> q2;
    for (auto v : n) q2.push_back(eval_surface(first, SampleSize::finite(v)));
    const auto second = fit_surface(n, q2, {}, StatisticKind::LM, 0.9, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::fabs(second.beta[k] - first.beta[k]) <= 1e-9 * std::max(1.0, std::fabs(first.beta[k])));
        CHECK(std::fabs(first.beta[k] - beta[k]) <= 1e-6 * std::fabs(beta[k]));
    }
}

TEST_CASE("fit errors") {
    const auto t = manufactured_table();
    SurfaceFitOptions opts;
    opts.order = static_cast<int>(t.n_count());
    CHECK_THROWS_WITH_AS(fit_surface(t, StatisticKind::LM, 0.95, opts), doctest::Contains("exceeds"), InvalidArgument);
    opts.order = 2;
    CHECK_THROWS_AS(fit_surface(t, StatisticKind::LM, 0.951, opts), InvalidArgument);
    opts.order = 0;
    CHECK_THROWS_AS(fit_surface(t, StatisticKind::LM, 0.95, opts), InvalidArgument);

    const std::vector<std::int64_t> same = {100, 100, 100, 100};
    const std::vector<double> q = {6.0, 6.0, 6.0, 6.0};
    CHECK_THROWS_WITH_AS(fit_surface(same, q, {}, StatisticKind::LM, 0.95, 2),
                         doctest::Contains("ill-conditioned fit; reduce K"), NumericError);
}

TEST_CASE("fits round-trip through text") {
    const auto t = manufactured_table();
    std::vector<SurfaceFit> fits;
    for (StatisticKind kind : kAllKinds) {
        SurfaceFitOptions opts;
        opts.order = kind == StatisticKind::LM ? 2 : 5;
        opts.weighted = kind == StatisticKind::ALM;
        fits.push_back(fit_surface(t, kind, 0.99, opts));
    }
    std::stringstream buffer;
    save_fits(fits, buffer);
    const auto back = load_fits(buffer);
    CHECK(back == fits);
    std::stringstream bad("jbfit\nformat_version=999\n");
    CHECK_THROWS_AS(load_fits(bad), DataError);
}
