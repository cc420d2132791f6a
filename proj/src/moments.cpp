#include "jb/moments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "jb/errors.hpp"
#include "vector_clones.hpp"

namespace jb {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

// Four interleaved error-free (TwoSum) accumulators; element i feeds lane
// i % 4. Branch-free, so the compiler can keep the lanes in vector registers.
class LaneSum {
public:
    static constexpr std::size_t kLanes = 4;

    void add(std::size_t lane, double x) {
        const double t = sum_[lane] + x;
        const double bp = t - sum_[lane];
        err_[lane] += (sum_[lane] - (t - bp)) + (x - bp);
        sum_[lane] = t;
    }
    void add4(const double* x) {
        for (std::size_t l = 0; l < kLanes; ++l) add(l, x[l]);
    }
    [[nodiscard]] double value() const {
        CompensatedSum total;
        for (std::size_t l = 0; l < kLanes; ++l) total.add(sum_[l]);
        for (std::size_t l = 0; l < kLanes; ++l) total.add(err_[l]);
        return total.value();
    }

private:
    double sum_[kLanes] = {};
    double err_[kLanes] = {};
};

std::vector<double> sorted_copy(std::span<const double> sample) {
    std::vector<double> v(sample.begin(), sample.end());
    std::sort(v.begin(), v.end());
    return v;
}

// Moments of a sorted sample, with the shared argument checks.
CentralMoments checked_moments(std::span<const double> sample) {
    if (sample.empty()) {
        throw InvalidArgument("empty sample");
    }
    if (sample.size() < 2) {
        throw InvalidArgument("sample too small: N < 2");
    }
    const auto sorted = sorted_copy(sample);
    if (sorted.front() == sorted.back()) {
        throw InvalidArgument("degenerate sample: all observations are equal");
    }
    const auto m = accumulate_moments(sorted);
    if (!(m.m2 > 0.0) || !std::isfinite(m.m4)) {
        throw InvalidArgument("degenerate sample: zero or non-finite variance");
    }
    return m;
}

}  // namespace

std::string_view to_string(StatisticKind kind) {
    return kind == StatisticKind::LM ? "LM" : "ALM";
}

StatisticKind parse_kind(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "LM") return StatisticKind::LM;
    if (upper == "ALM") return StatisticKind::ALM;
    throw InvalidArgument("unknown statistic kind '" + std::string(text) + "' (expected LM or ALM)");
}

// Lane-wise IEEE operations without contraction: every clone rounds identically.
JB_VECTOR_CLONES CentralMoments accumulate_moments(std::span<const double> values) {
    CentralMoments out;
    out.n = values.size();
    if (values.empty()) return out;
    constexpr std::size_t L = LaneSum::kLanes;
    const std::size_t size = values.size();
    const std::size_t bulk = size - size % L;
    const double* x = values.data();

    LaneSum total;
    for (std::size_t i = 0; i < bulk; i += L) total.add4(x + i);
    for (std::size_t i = bulk; i < size; ++i) total.add(i % L, x[i]);
    const double n = static_cast<double>(size);
    out.mean = total.value() / n;

    LaneSum s2, s3, s4;
    double d2[L], d3[L], d4[L];
    for (std::size_t i = 0; i < bulk; i += L) {
        for (std::size_t l = 0; l < L; ++l) {
            const double d = x[i + l] - out.mean;
            d2[l] = d * d;
            d3[l] = d2[l] * d;
            d4[l] = d2[l] * d2[l];
        }
        s2.add4(d2);
        s3.add4(d3);
        s4.add4(d4);
    }
    for (std::size_t i = bulk; i < size; ++i) {
        const double d = x[i] - out.mean;
        const double sq = d * d;
        s2.add(i % L, sq);
        s3.add(i % L, sq * d);
        s4.add(i % L, sq * sq);
    }
    out.m2 = s2.value() / n;
    out.m3 = s3.value() / n;
    out.m4 = s4.value() / n;
    return out;
}

double central_moment(std::span<const double> sample, int order) {
    if (sample.empty()) {
        throw InvalidArgument("empty sample");
    }
    if (order < 1) {
        throw InvalidArgument("central moment order must be positive");
    }
    const auto sorted = sorted_copy(sample);
    const auto m = accumulate_moments(sorted);
    switch (order) {
        case 2: return m.m2;
        case 3: return m.m3;
        case 4: return m.m4;
        default: break;
    }
    CompensatedSum s;
    for (double x : sorted) s.add(std::pow(x - m.mean, order));
    return s.value() / static_cast<double>(sorted.size());
}

double skewness(std::span<const double> sample) {
    const auto m = checked_moments(sample);
    return m.m3 / std::pow(m.m2, 1.5);
}

double kurtosis(std::span<const double> sample) {
    const auto m = checked_moments(sample);
    return m.m4 / (m.m2 * m.m2);
}

double lm_statistic(std::span<const double> sample) {
    const auto m = checked_moments(sample);
    return lm_from_shape(static_cast<std::int64_t>(m.n), m.m3 / std::pow(m.m2, 1.5),
                         m.m4 / (m.m2 * m.m2));
}

FiniteSampleConstants finite_constants(std::int64_t n) {
    if (n < 4) {
        throw InvalidArgument("ALM undefined for N < 4");
    }
    const double N = static_cast<double>(n);
    FiniteSampleConstants c;
    c.n = n;
    c.c1 = 6.0 * (N - 2.0) / ((N + 1.0) * (N + 3.0));
    c.c2 = 3.0 * (N - 1.0) / (N + 1.0);
    c.c3 = 24.0 * N * (N - 2.0) * (N - 3.0) / ((N + 1.0) * (N + 1.0) * (N + 3.0) * (N + 5.0));
    return c;
}

double alm_statistic(std::span<const double> sample) {
    if (!sample.empty() && sample.size() < 4) {
        throw InvalidArgument("ALM undefined for N < 4");
    }
    const auto m = checked_moments(sample);
    const auto c = finite_constants(static_cast<std::int64_t>(m.n));
    return alm_from_shape(c, m.m3 / std::pow(m.m2, 1.5), m.m4 / (m.m2 * m.m2));
}

double chi2_cdf_2df(double x) {
    if (!(x >= 0.0)) {
        throw InvalidArgument("chi-square argument must be nonnegative");
    }
    return -std::expm1(-0.5 * x);
}

double chi2_survival_2df(double x) {
    if (!(x >= 0.0)) {
        throw InvalidArgument("chi-square argument must be nonnegative");
    }
    return std::exp(-0.5 * x);
}

double chi2_quantile_2df(double p) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw InvalidArgument("probability must lie in [0, 1)");
    }
    return -2.0 * std::log1p(-p);
}

}  // namespace jb
