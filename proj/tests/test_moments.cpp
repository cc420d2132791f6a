#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "jb/errors.hpp"
#include "jb/moments.hpp"
#include "oracles.hpp"

using namespace jb;

namespace {

std::vector<double> as_doubles(const std::vector<std::int64_t>& v) { return {v.begin(), v.end()}; }

std::vector<double> random_sample(std::mt19937_64& rng, std::size_t n) {
    std::gamma_distribution<double> shape(2.0, 1.5);
    std::vector<double> x(n);
    for (auto& v : x) v = shape(rng);
    return x;
}

}  // namespace

TEST_CASE("central moments match hand values") {
    CHECK(central_moment(std::vector<double>{-1, 1}, 2) == 1.0);
    CHECK(central_moment(std::vector<double>{5, 5, 5}, 3) == 0.0);
    CHECK(central_moment(std::vector<double>{-1, 0, 1}, 4) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(central_moment(std::vector<double>{}, 2), "empty sample", InvalidArgument);
}

TEST_CASE("central moments agree with the exact rational oracle") {
    const std::vector<std::vector<std::int64_t>> samples = {
        {0, 0, 0, 4}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {-7, 3, 3, 11, 0, -2, 5}, {100, 101, 99, 250, 98}};
    for (const auto& s : samples) {
        const auto x = as_doubles(s);
        for (int order = 1; order <= 6; ++order) {
            const double exact = oracle::central_moment(s, order).to_double();
            CHECK(central_moment(x, order) == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("skewness") {
    CHECK(skewness(std::vector<double>{-1, 0, 1}) == 0.0);
    // m2 = 3, m3 = 6 (see the rational oracle)
    const auto m2 = oracle::central_moment({0, 0, 0, 4}, 2).to_double();
    const auto m3 = oracle::central_moment({0, 0, 0, 4}, 3).to_double();
    CHECK(m2 == 3.0);
    CHECK(m3 == 6.0);
    CHECK(skewness(std::vector<double>{0, 0, 0, 4}) == doctest::Approx(1.1547005383792517).epsilon(1e-15));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = random_sample(rng, 5 + trial * 7);
        std::vector<double> neg(x.size());
        std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
        CHECK(skewness(neg) == doctest::Approx(-skewness(x)).epsilon(1e-12));
    }
}

TEST_CASE("kurtosis") {
    CHECK(kurtosis(std::vector<double>{-1, 1}) == 1.0);
    CHECK(kurtosis(std::vector<double>{-1, 0, 1}) == doctest::Approx(1.5).epsilon(1e-15));
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = random_sample(rng, 4 + trial * 5);
        auto y = x;
        for (auto& v : y) v = -2.5 * v + 17.0;
        CHECK(kurtosis(y) == doctest::Approx(kurtosis(x)).epsilon(1e-10));
    }
}

TEST_CASE("LM statistic hand oracles") {
    CHECK(lm_statistic(std::vector<double>{-1, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(lm_statistic(std::vector<double>{-1, 0, 1}) == doctest::Approx(0.28125).epsilon(1e-15));
    CHECK(std::fabs(lm_statistic(std::vector<double>{-1, -1, 1, 1}) - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("finite-sample constants equal the exact rational formulas") {
    const auto c10 = finite_constants(10);
    CHECK(c10.c1 == doctest::Approx(0.3356643).epsilon(1e-7));
    CHECK(c10.c2 == doctest::Approx(2.4545455).epsilon(1e-7));
    CHECK(c10.c3 == doctest::Approx(0.5696122).epsilon(1e-7));

    const auto c4 = finite_constants(4);
    CHECK(c4.c1 == doctest::Approx(12.0 / 35.0).epsilon(1e-15));
    CHECK(c4.c2 == doctest::Approx(1.8).epsilon(1e-15));
    CHECK(c4.c3 == doctest::Approx(192.0 / 1575.0).epsilon(1e-15));

    for (std::int64_t n : {4, 5, 7, 10, 25, 100, 1000, 12345}) {
        const auto exact = oracle::finite_constants(n);
        const auto c = finite_constants(n);
        CHECK(c.c1 == doctest::Approx(exact.c1.to_double()).epsilon(1e-14));
        CHECK(c.c2 == doctest::Approx(exact.c2.to_double()).epsilon(1e-14));
        CHECK(c.c3 == doctest::Approx(exact.c3.to_double()).epsilon(1e-14));
    }

    const auto big = finite_constants(1'000'000);
    CHECK(std::fabs(big.c2 - 3.0) < 1e-5);
    CHECK(std::fabs(1e6 * big.c1 / 6.0 - 1.0) < 1e-4);
    CHECK(std::fabs(1e6 * big.c3 / 24.0 - 1.0) < 1e-4);

    CHECK_THROWS_WITH_AS(finite_constants(3), "ALM undefined for N < 4", InvalidArgument);
}

TEST_CASE("ALM statistic") {
    // b1 = 0, b2 = 1, c2 = 9/5, c3 = 192/1575: (1 - 9/5)^2 / c3 = 0.64 * 1575 / 192 = 5.25.
    const auto c = oracle::finite_constants(4);
    const double expected = ((oracle::Rational::of(1) - c.c2) * (oracle::Rational::of(1) - c.c2) / c.c3).to_double();
    CHECK(expected == 5.25);
    CHECK(std::fabs(alm_statistic(std::vector<double>{-1, -1, 1, 1}) - 5.25) < 1e-12);

    CHECK_THROWS_WITH_AS(alm_statistic(std::vector<double>{1, 2, 3}), "ALM undefined for N < 4", InvalidArgument);

    // Symmetric sample: only the kurtosis term contributes.
    const std::vector<double> sym = {-3, -1, -0.5, 0, 0.5, 1, 3};
    const auto cs = finite_constants(7);
    const double k = kurtosis(sym);
    CHECK(alm_statistic(sym) == doctest::Approx((k - cs.c2) * (k - cs.c2) / cs.c3).epsilon(1e-13));
}

TEST_CASE("ALM approaches LM for very large samples") {
    std::mt19937_64 rng(5);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> x(1'000'000);
    for (auto& v : x) v = expo(rng);
    const double lm = lm_statistic(x);
    const double alm = alm_statistic(x);
    CHECK(std::fabs(alm - lm) / lm < 1e-4);
}

TEST_CASE("degenerate and tiny samples are rejected") {
    const std::vector<double> constant = {5, 5, 5, 5};
    CHECK_THROWS_AS(skewness(constant), InvalidArgument);
    CHECK_THROWS_AS(kurtosis(constant), InvalidArgument);
    CHECK_THROWS_AS(lm_statistic(constant), InvalidArgument);
    CHECK_THROWS_AS(alm_statistic(constant), InvalidArgument);
    try {
        (void)lm_statistic(std::vector<double>{0.1, 0.1, 0.1, 0.1, 0.1});
        FAIL("expected degenerate sample error");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("degenerate sample") != std::string::npos);
    }
    CHECK_THROWS_AS(lm_statistic(std::vector<double>{1.0}), InvalidArgument);
    CHECK_THROWS_AS(lm_statistic(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("statistics are invariant to location, scale and order") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng() % 300);
        auto x = random_sample(rng, n);
        const double lm = lm_statistic(x);
        const double alm = alm_statistic(x);
        CHECK(lm >= 0.0);
        CHECK(alm >= 0.0);

        const double a = (trial % 2 ? -1.0 : 1.0) * (0.01 + 10.0 * std::generate_canonical<double, 53>(rng));
        const double b = 1000.0 * (std::generate_canonical<double, 53>(rng) - 0.5);
        auto y = x;
        for (auto& v : y) v = a * v + b;
        CHECK(lm_statistic(y) == doctest::Approx(lm).epsilon(1e-9));
        CHECK(alm_statistic(y) == doctest::Approx(alm).epsilon(1e-9));

        auto shuffled = x;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(lm_statistic(shuffled) == lm);  // bit-exact
        CHECK(alm_statistic(shuffled) == alm);
        std::reverse(shuffled.begin(), shuffled.end());
        CHECK(skewness(shuffled) == skewness(x));
        CHECK(kurtosis(shuffled) == kurtosis(x));
    }
}

TEST_CASE("chi-square(2) closed forms") {
    CHECK(chi2_cdf_2df(0.0) == 0.0);
    CHECK(chi2_cdf_2df(5.991465) == doctest::Approx(0.95).epsilon(1e-6));
    CHECK(1.0 - chi2_cdf_2df(1.9333) == doctest::Approx(0.3804).epsilon(5e-4));
    CHECK(chi2_survival_2df(1.9333) == doctest::Approx(0.3804).epsilon(5e-4));
    CHECK(chi2_quantile_2df(0.0) == 0.0);
    CHECK(std::fabs(chi2_quantile_2df(0.95) - 5.991465) < 1e-5);
    CHECK(std::fabs(chi2_quantile_2df(0.95) + 2.0 * std::log(0.05)) < 1e-14);
    for (int i = 1; i <= 99; ++i) {
        const double p = i / 100.0;
        CHECK(std::fabs(chi2_cdf_2df(chi2_quantile_2df(p)) - p) < 1e-12);
    }
    CHECK_THROWS_AS(chi2_cdf_2df(-0.1), InvalidArgument);
    CHECK_THROWS_AS(chi2_quantile_2df(1.0), InvalidArgument);
    CHECK_THROWS_AS(chi2_quantile_2df(-0.01), InvalidArgument);
}

TEST_CASE("statistic kind names") {
    CHECK(parse_kind("lm") == StatisticKind::LM);
    CHECK(parse_kind("ALM") == StatisticKind::ALM);
    CHECK(to_string(StatisticKind::ALM) == "ALM");
    CHECK_THROWS_AS(parse_kind("JB"), InvalidArgument);
}
