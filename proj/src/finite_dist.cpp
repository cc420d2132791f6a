#include "jb/finite_dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jb/errors.hpp"

namespace jb {
namespace {

double to_u(double p) { return -std::log1p(-p); }
double from_u(double u) { return -std::expm1(-u); }

// Position of a query within the table's n grid.
struct Bracket {
    std::size_t lo = 0;
    std::size_t hi = 0;
    double weight = 0.0;        // of column hi, linear in ln n
    double table_share = 1.0;   // < 1 above the grid: blended with the closed form
};

Bracket bracket_n(const QuantileTable& table, std::int64_t n) {
    const auto grid = table.n_grid();
    if (n < grid.front()) {
        throw InvalidArgument("sample size below table range (N=" + std::to_string(n) +
                              " < " + std::to_string(grid.front()) + ")");
    }
    Bracket b;
    if (n >= grid.back()) {
        b.lo = b.hi = grid.size() - 1;
        b.table_share = static_cast<double>(grid.back()) / static_cast<double>(n);
        return b;
    }
    const auto it = std::upper_bound(grid.begin(), grid.end(), n);
    b.hi = static_cast<std::size_t>(it - grid.begin());
    b.lo = b.hi - 1;
    if (grid[b.lo] == n) {
        b.hi = b.lo;
        return b;
    }
    const double ln_lo = std::log(static_cast<double>(grid[b.lo]));
    const double ln_hi = std::log(static_cast<double>(grid[b.hi]));
    b.weight = (std::log(static_cast<double>(n)) - ln_lo) / (ln_hi - ln_lo);
    return b;
}

struct ColumnPoint {
    double coord = 0.0;                  // u for cdf, w for quantile
    std::optional<double> exact;         // stored knot value, when hit exactly
};

std::optional<ColumnPoint> column_cdf(std::span<const double> qs, std::span<const double> ps, double q) {
    if (q > qs.back()) return std::nullopt;
    if (q < qs.front()) {
        const double p = ps.front() * (q / qs.front());
        return ColumnPoint{to_u(std::clamp(p, 0.0, ps.front())), std::nullopt};
    }
    // First knot strictly above q; ties resolve to the largest p with q_i <= q.
    const auto k = static_cast<std::size_t>(std::upper_bound(qs.begin(), qs.end(), q) - qs.begin());
    if (k == qs.size() || qs[k - 1] == q) {
        return ColumnPoint{to_u(ps[k - 1]), ps[k - 1]};
    }
    const double w0 = std::log(qs[k - 1]);
    const double w1 = std::log(qs[k]);
    const double t = (std::log(q) - w0) / (w1 - w0);
    const double u0 = to_u(ps[k - 1]);
    const double u1 = to_u(ps[k]);
    return ColumnPoint{u0 + t * (u1 - u0), std::nullopt};
}

ColumnPoint column_quantile(std::span<const double> qs, std::span<const double> ps, double p) {
    const auto k = static_cast<std::size_t>(std::upper_bound(ps.begin(), ps.end(), p) - ps.begin());
    if (k == ps.size() || ps[k - 1] == p) {
        return ColumnPoint{std::log(qs[k - 1]), qs[k - 1]};
    }
    const double u0 = to_u(ps[k - 1]);
    const double u1 = to_u(ps[k]);
    const double t = (to_u(p) - u0) / (u1 - u0);
    const double w0 = std::log(qs[k - 1]);
    const double w1 = std::log(qs[k]);
    return ColumnPoint{w0 + t * (w1 - w0), std::nullopt};
}

void require_positive_column(std::span<const double> qs) {
    if (!(qs.front() > 0.0)) throw DataError("invalid table: non-positive quantile in column");
}

}  // namespace

PValueResult pjb(double q, SampleSize n, StatisticKind /*kind*/) {
    if (!n.is_infinite()) throw InvalidArgument("a finite sample size requires a quantile table");
    return PValueResult{chi2_cdf_2df(q), 0.0};
}

PValueResult pjb(double q, SampleSize n, StatisticKind kind, const QuantileTable& table) {
    if (!(q >= 0.0)) throw InvalidArgument("quantile must be nonnegative");
    if (n.is_infinite()) return pjb(q, n, kind);

    PValueResult result;
    result.resolution_bound = 1.0 - table.p_grid().back();
    const Bracket b = bracket_n(table, n.value());

    const auto lo_col = table.column(kind, b.lo);
    require_positive_column(lo_col);
    const auto lo = column_cdf(lo_col, table.p_grid(), q);
    if (!lo) return result;

    if (b.lo == b.hi) {
        if (b.table_share == 1.0) {
            result.value = lo->exact ? *lo->exact : from_u(lo->coord);
            return result;
        }
        const double u = b.table_share * lo->coord + (1.0 - b.table_share) * (0.5 * q);
        result.value = from_u(u);
        return result;
    }

    const auto hi_col = table.column(kind, b.hi);
    require_positive_column(hi_col);
    const auto hi = column_cdf(hi_col, table.p_grid(), q);
    if (!hi) return result;
    result.value = from_u(lo->coord + b.weight * (hi->coord - lo->coord));
    return result;
}

double qjb(double p, SampleSize n, StatisticKind /*kind*/) {
    if (!n.is_infinite()) throw InvalidArgument("a finite sample size requires a quantile table");
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("probability must lie in (0, 1)");
    return chi2_quantile_2df(p);
}

double qjb(double p, SampleSize n, StatisticKind kind, const QuantileTable& table) {
    if (n.is_infinite()) return qjb(p, n, kind);
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("probability must lie in (0, 1)");
    const auto ps = table.p_grid();
    if (p < ps.front() || p > ps.back()) throw InvalidArgument("quantile outside tabulated range");

    const Bracket b = bracket_n(table, n.value());
    const auto lo_col = table.column(kind, b.lo);
    require_positive_column(lo_col);
    const ColumnPoint lo = column_quantile(lo_col, ps, p);

    if (b.lo == b.hi) {
        if (b.table_share == 1.0) return lo.exact ? *lo.exact : std::exp(lo.coord);
        const double w_limit = std::log(chi2_quantile_2df(p));
        return std::exp(b.table_share * lo.coord + (1.0 - b.table_share) * w_limit);
    }
    const auto hi_col = table.column(kind, b.hi);
    require_positive_column(hi_col);
    const ColumnPoint hi = column_quantile(hi_col, ps, p);
    return std::exp(lo.coord + b.weight * (hi.coord - lo.coord));
}

namespace {

TestResult statistics_only(std::span<const double> sample) {
    TestResult r;
    r.n = static_cast<std::int64_t>(sample.size());
    r.lm = lm_statistic(sample);
    r.alm = alm_statistic(sample);
    r.p_asymptotic = chi2_survival_2df(r.lm);
    return r;
}

PValueResult upper_tail(const PValueResult& cdf) {
    PValueResult out;
    out.resolution_bound = cdf.resolution_bound;
    if (cdf.value) out.value = 1.0 - *cdf.value;
    return out;
}

}  // namespace

TestResult jb_test(std::span<const double> sample) { return statistics_only(sample); }

TestResult jb_test(std::span<const double> sample, const QuantileTable& table) {
    TestResult r = statistics_only(sample);
    const double bound = 1.0 - table.p_grid().back();
    r.p_lm.resolution_bound = r.p_alm.resolution_bound = bound;
    if (r.n < table.n_grid().front()) return r;
    r.p_lm = upper_tail(pjb(r.lm, SampleSize::finite(r.n), StatisticKind::LM, table));
    r.p_alm = upper_tail(pjb(r.alm, SampleSize::finite(r.n), StatisticKind::ALM, table));
    return r;
}

}  // namespace jb
