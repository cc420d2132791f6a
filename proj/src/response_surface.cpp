#include "jb/response_surface.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "jb/errors.hpp"
#include "jb/text_format.hpp"

namespace jb {

SurfaceFit fit_surface(std::span<const std::int64_t> n, std::span<const double> q, std::span<const double> weights,
                       StatisticKind kind, double p, int order) {
    if (order < 1) throw InvalidArgument("order K must be at least 1");
    if (n.size() != q.size() || (!weights.empty() && weights.size() != n.size())) {
        throw InvalidArgument("fit data sizes differ");
    }
    if (static_cast<std::size_t>(order) + 1 > n.size()) {
        throw InvalidArgument("order K=" + std::to_string(order) + " exceeds number of sample sizes - 1 (" +
                              std::to_string(n.size()) + " points)");
    }
    const auto rows = static_cast<Eigen::Index>(n.size());
    SurfaceFit fit;
    fit.kind = kind;
    fit.p = p;
    fit.order = order;
    fit.q_inf = chi2_quantile_2df(p);
    fit.weighted = !weights.empty();

    Eigen::MatrixXd design(rows, order);
    Eigen::VectorXd target(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double inv_n = 1.0 / static_cast<double>(n[i]);
        const double row_weight = weights.empty() ? 1.0 : std::sqrt(weights[i]);
        double power = 1.0;
        for (int k = 0; k < order; ++k) {
            power *= inv_n;
            design(i, k) = row_weight * power;
        }
        target(i) = row_weight * (q[i] - fit.q_inf);
    }

    Eigen::VectorXd scale = design.colwise().norm().transpose();
    for (int k = 0; k < order; ++k) {
        if (!(scale(k) > 0.0) || !std::isfinite(scale(k))) {
            throw NumericError("ill-conditioned fit; reduce K");
        }
        design.col(k) /= scale(k);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-13);
    if (qr.rank() < order) throw NumericError("ill-conditioned fit; reduce K");
    const Eigen::VectorXd scaled = qr.solve(target);

    fit.beta.resize(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        fit.beta[static_cast<std::size_t>(k)] = scaled(k) / scale(k);
        if (!std::isfinite(fit.beta[static_cast<std::size_t>(k)])) {
            throw NumericError("ill-conditioned fit; reduce K");
        }
    }

    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double r = q[i] - eval_surface(fit, SampleSize::finite(n[i]));
        sum_sq += r * r;
        fit.max_residual = std::max(fit.max_residual, std::fabs(r));
    }
    fit.rms_residual = std::sqrt(sum_sq / static_cast<double>(n.size()));
    fit.n_min = n.front();
    fit.n_max = n.back();
    fit.points = n.size();
    return fit;
}

SurfaceFit fit_surface(const QuantileTable& table, StatisticKind kind, double p, const SurfaceFitOptions& options) {
    const std::size_t pi = table.find_p(p);
    if (pi == QuantileTable::npos) {
        throw InvalidArgument("p=" + text::format_shortest(p) + " is not on the table's p grid");
    }
    std::vector<std::int64_t> ns;
    std::vector<double> qs;
    std::vector<double> ws;
    for (std::size_t j = 0; j < table.n_count(); ++j) {
        if (table.n_grid()[j] < options.min_n) continue;
        ns.push_back(table.n_grid()[j]);
        qs.push_back(table.quantile(kind, pi, j));
        if (options.weighted) {
            const double se = table.std_error(kind, pi, j);
            if (!(se > 0.0)) throw InvalidArgument("weighted fit needs positive standard errors");
            ws.push_back(1.0 / (se * se));
        }
    }
    return fit_surface(ns, qs, ws, kind, p, options.order);
}

double eval_surface(const SurfaceFit& fit, SampleSize n) {
    if (n.is_infinite()) return fit.q_inf;
    const double inv_n = 1.0 / static_cast<double>(n.value());
    // Horner in 1/n: inv_n * (b1 + inv_n * (b2 + ...)).
    double series = 0.0;
    for (auto it = fit.beta.rbegin(); it != fit.beta.rend(); ++it) series = (series + *it) * inv_n;
    return std::max(0.0, fit.q_inf + series);
}

void save_fits(std::span<const SurfaceFit> fits, std::ostream& out) {
    out << "jbfit\nformat_version=" << kFormatVersion << "\nfits=" << fits.size() << '\n';
    for (const auto& f : fits) {
        out << "[fit]\nkind=" << to_string(f.kind) << "\np=" << text::format_shortest(f.p) << "\norder=" << f.order
            << "\nq_inf=" << text::format_exact(f.q_inf) << "\nbeta=";
        for (std::size_t k = 0; k < f.beta.size(); ++k) out << (k ? "," : "") << text::format_exact(f.beta[k]);
        out << "\nweighted=" << (f.weighted ? 1 : 0) << "\nn_min=" << f.n_min << "\nn_max=" << f.n_max
            << "\npoints=" << f.points << "\nrms_residual=" << text::format_exact(f.rms_residual)
            << "\nmax_residual=" << text::format_exact(f.max_residual) << "\n[end]\n";
    }
    if (!out) throw DataError("failed to write fits");
}

std::vector<SurfaceFit> load_fits(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "jbfit") throw DataError("unsupported format: missing 'jbfit' magic line");
    if (!std::getline(in, line) || line != "format_version=" + std::to_string(kFormatVersion)) {
        throw DataError("unsupported format: " + line);
    }
    if (!std::getline(in, line) || line.rfind("fits=", 0) != 0) throw DataError("corrupt fit file: missing count");
    std::vector<SurfaceFit> fits;
    try {
        const auto count = text::parse_uint(std::string_view(line).substr(5));
        for (std::uint64_t i = 0; i < count; ++i) {
            if (!std::getline(in, line) || line != "[fit]") throw DataError("corrupt fit file: missing [fit]");
            std::map<std::string, std::string> kv;
            while (std::getline(in, line) && line != "[end]") {
                const auto eq = line.find('=');
                if (eq == std::string::npos) throw DataError("corrupt fit file: '" + line + "'");
                kv[line.substr(0, eq)] = line.substr(eq + 1);
            }
            SurfaceFit f;
            f.kind = parse_kind(kv.at("kind"));
            f.p = text::parse_double(kv.at("p"));
            f.order = static_cast<int>(text::parse_int(kv.at("order")));
            f.q_inf = text::parse_double(kv.at("q_inf"));
            for (auto tok : text::split(kv.at("beta"), ',')) f.beta.push_back(text::parse_double(tok));
            f.weighted = kv.at("weighted") == "1";
            f.n_min = text::parse_int(kv.at("n_min"));
            f.n_max = text::parse_int(kv.at("n_max"));
            f.points = text::parse_uint(kv.at("points"));
            f.rms_residual = text::parse_double(kv.at("rms_residual"));
            f.max_residual = text::parse_double(kv.at("max_residual"));
            if (f.beta.size() != static_cast<std::size_t>(f.order)) throw DataError("corrupt fit file: order mismatch");
            fits.push_back(std::move(f));
        }
    } catch (const std::out_of_range&) {
        throw DataError("corrupt fit file: missing key");
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("corrupt fit file: ") + e.what());
    }
    return fits;
}

}  // namespace jb
