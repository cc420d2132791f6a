// jbtool: finite-sample Jarque-Bera tables, p-values, quantiles and surface fits.
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 numeric error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jb/errors.hpp"
#include "jb/finite_dist.hpp"
#include "jb/moments.hpp"
#include "jb/response_surface.hpp"
#include "jb/simulation.hpp"
#include "jb/table_io.hpp"
#include "jb/text_format.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

using jb::text::format_exact;
using jb::text::format_shortest;

std::string fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

std::string scientific(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4e", x);
    return buf;
}

// Asymptotic p-values follow the "< 2.2e-16" convention of R's printed tests.
std::string format_asymptotic(double p) {
    if (p < 2.2e-16) return "< 2.2e-16";
    if (p < 1e-4) return "= " + scientific(p);
    return "= " + fixed(p, 4);
}

std::string format_finite(const jb::PValueResult& p) {
    if (!p.value) return "NA";
    return *p.value < 1e-4 ? scientific(*p.value) : fixed(*p.value, 4);
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        for (auto tok : jb::text::split(item, ',')) {
            if (!tok.empty()) out.emplace_back(tok);
        }
    }
    return out;
}

jb::SampleSize parse_sample_size(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF") return jb::SampleSize::infinite();
    const auto n = jb::text::parse_int(text);
    if (n < 1) throw jb::InvalidArgument("sample size must be positive or 'inf'");
    return jb::SampleSize::finite(n);
}

std::vector<jb::StatisticKind> parse_kinds(const std::string& text) {
    if (text == "both" || text == "BOTH") return {jb::StatisticKind::LM, jb::StatisticKind::ALM};
    return {jb::parse_kind(text)};
}

std::vector<double> read_observations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw jb::DataError("cannot read data file '" + path + "'");
    std::vector<double> values;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        try {
            values.push_back(jb::text::parse_double(std::string_view(line).substr(first, last - first + 1)));
        } catch (const jb::InvalidArgument&) {
            throw jb::DataError("unreadable data file '" + path + "': line " + std::to_string(lineno));
        }
    }
    return values;
}

std::optional<jb::QuantileTable> load_optional_table(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return jb::load_table_file(path);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string preset = "paper";
    std::vector<std::string> n_grid;
    std::vector<std::string> p_grid;
    std::string replications;
    std::uint64_t seed = 0;
    std::string generator = "philox4x32-10";
    std::uint64_t chunk_size = 10'000;
    int workers = 0;
    std::string out;
    bool progress = false;
};

int cmd_simulate(const SimulateArgs& a) {
    jb::SimConfig cfg;
    if (a.preset == "paper") {
        cfg = jb::paper_preset();
    } else if (a.preset == "quick") {
        cfg = jb::quick_preset();
    } else {
        throw jb::InvalidArgument("unknown preset '" + a.preset + "' (expected paper or quick)");
    }
    if (!a.n_grid.empty()) {
        cfg.n_grid.clear();
        for (const auto& tok : split_list(a.n_grid)) cfg.n_grid.push_back(jb::text::parse_int(tok));
    }
    if (!a.p_grid.empty()) {
        const auto toks = split_list(a.p_grid);
        if (!(toks.size() == 1 && toks[0] == "default")) {
            cfg.p_grid.clear();
            for (const auto& tok : toks) cfg.p_grid.push_back(jb::text::parse_double(tok));
        }
    }
    if (!a.replications.empty()) cfg.replications = jb::text::parse_uint(a.replications);
    cfg.seed = a.seed;
    cfg.generator = jb::parse_generator(a.generator);
    cfg.chunk_size = a.chunk_size;
    jb::validate_config(cfg);

    std::cout << "config: subcommand=simulate preset=" << a.preset << " seed=" << cfg.seed
              << " generator=" << jb::to_string(cfg.generator) << " replications=" << cfg.replications
              << " chunk_size=" << cfg.chunk_size << " n_grid=";
    for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) std::cout << (i ? "," : "") << cfg.n_grid[i];
    std::cout << " p_points=" << cfg.p_grid.size() << " out=" << a.out << '\n';

    jb::RunOptions options;
    options.workers = a.workers;
    if (a.progress) {
        options.progress = [](std::uint64_t done, std::uint64_t total) {
            std::fprintf(stderr, "\rprogress %llu/%llu", static_cast<unsigned long long>(done),
                         static_cast<unsigned long long>(total));
            if (done == total) std::fputc('\n', stderr);
        };
    }
    const auto start = std::chrono::steady_clock::now();
    const auto campaign = jb::simulate_campaign(cfg, options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    jb::save_table_file(campaign.table, a.out);

    for (const auto& d : campaign.diagnostics) {
        std::cout << "n=" << d.n << " z_mean_b2=" << fixed(d.z_mean_b2, 3) << " z_var_b2=" << fixed(d.z_var_b2, 3)
                  << " z_var_sqrt_b1=" << fixed(d.z_var_sqrt_b1, 3) << '\n';
    }
    std::cout << "# elapsed_seconds=" << fixed(seconds, 3) << " workers=" << (a.workers > 0 ? a.workers : 0) << '\n';
    return kOk;
}

// ---------------------------------------------------------------- diagnose

int cmd_diagnose(const std::vector<std::string>& n_list, const std::string& replications, std::uint64_t seed,
                 const std::string& generator, std::uint64_t chunk_size, int workers) {
    const std::uint64_t r = jb::text::parse_uint(replications);
    const auto gen = jb::parse_generator(generator);
    std::cout << "config: subcommand=diagnose seed=" << seed << " generator=" << jb::to_string(gen)
              << " replications=" << r << " chunk_size=" << chunk_size << '\n';
    for (const auto& tok : split_list(n_list)) {
        const auto n = jb::text::parse_int(tok);
        const auto start = std::chrono::steady_clock::now();
        const auto d = jb::moment_diagnostics(n, r, seed, gen, chunk_size, workers);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "n=" << d.n << '\n'
                  << "  mean_b2=" << format_exact(d.mean_b2) << " expected_c2=" << format_exact(d.expected.c2)
                  << " z=" << fixed(d.z_mean_b2, 3) << '\n'
                  << "  var_b2=" << format_exact(d.var_b2) << " expected_c3=" << format_exact(d.expected.c3)
                  << " z=" << fixed(d.z_var_b2, 3) << '\n'
                  << "  var_sqrt_b1=" << format_exact(d.var_sqrt_b1) << " expected_c1=" << format_exact(d.expected.c1)
                  << " z=" << fixed(d.z_var_sqrt_b1, 3) << '\n'
                  << "# elapsed_seconds=" << fixed(seconds, 3) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- pvalue / quantile

int cmd_pvalue(const std::vector<std::string>& qs, const std::string& n_text, const std::string& kind_text,
               const std::string& table_path, int digits) {
    const auto n = parse_sample_size(n_text);
    const auto kind = jb::parse_kind(kind_text);
    std::cerr << "# config: subcommand=pvalue n=" << n_text << " kind=" << jb::to_string(kind)
              << " table=" << (table_path.empty() ? "none" : table_path) << '\n';
    if (!n.is_infinite() && table_path.empty()) throw jb::InvalidArgument("--table is required for finite --n");
    const auto table = load_optional_table(table_path);
    for (const auto& tok : split_list(qs)) {
        const double q = jb::text::parse_double(tok);
        const auto p = table ? jb::pjb(q, n, kind, *table) : jb::pjb(q, n, kind);
        std::cout << (p.value ? jb::text::format_general(*p.value, digits) : "NA") << '\n';
    }
    return kOk;
}

int cmd_quantile(const std::vector<std::string>& ps, const std::string& n_text, const std::string& kind_text,
                 const std::string& table_path, int digits) {
    const auto n = parse_sample_size(n_text);
    const auto kind = jb::parse_kind(kind_text);
    std::cerr << "# config: subcommand=quantile n=" << n_text << " kind=" << jb::to_string(kind)
              << " table=" << (table_path.empty() ? "none" : table_path) << '\n';
    if (!n.is_infinite() && table_path.empty()) throw jb::InvalidArgument("--table is required for finite --n");
    const auto table = load_optional_table(table_path);
    for (const auto& tok : split_list(ps)) {
        const double p = jb::text::parse_double(tok);
        const double q = table ? jb::qjb(p, n, kind, *table) : jb::qjb(p, n, kind);
        std::cout << jb::text::format_general(q, digits) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- test

int cmd_test(const std::string& data_path, const std::string& table_path, const std::string& kind_text) {
    const auto kinds = parse_kinds(kind_text);
    std::cout << "config: subcommand=test data=" << data_path << " table=" << (table_path.empty() ? "none" : table_path)
              << " kind=" << kind_text << '\n';
    const auto table = load_optional_table(table_path);
    const auto sample = read_observations(data_path);
    jb::TestResult r;
    try {
        if (sample.size() < 4) throw jb::InvalidArgument("ALM undefined for N < 4 (N=" + std::to_string(sample.size()) + ")");
        r = table ? jb::jb_test(sample, *table) : jb::jb_test(sample);
    } catch (const jb::InvalidArgument& e) {
        throw jb::DataError(e.what());
    }

    const bool lm = kinds.front() == jb::StatisticKind::LM;
    const bool alm = kinds.back() == jb::StatisticKind::ALM;
    std::string stats, pvalues;
    if (lm) {
        stats += "LM = " + fixed(r.lm, 4);
        pvalues += "LM p-value = " + format_finite(r.p_lm);
    }
    if (alm) {
        stats += std::string(lm ? ", " : "") + "ALM = " + fixed(r.alm, 4);
        pvalues += std::string(lm ? ", " : "") + "ALM p-value = " + format_finite(r.p_alm);
    }
    std::cout << "\n        Jarque-Bera Test\n\n"
              << "data:  " << data_path << '\n'
              << "N = " << r.n << '\n'
              << stats << ",\n"
              << pvalues << ",\n"
              << "p-value " << format_asymptotic(r.p_asymptotic) << "\n\n";
    return kOk;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string table;
    std::vector<std::string> p;
    int order = 6;
    std::string kind = "both";
    std::int64_t min_n = 0;
    bool weighted = false;
    std::string out;
    std::string plot_prefix;
};

int cmd_fit(const FitArgs& a) {
    const auto table = jb::load_table_file(a.table);
    const auto kinds = parse_kinds(a.kind);
    const std::string prefix = a.plot_prefix.empty() ? a.out + ".plot" : a.plot_prefix;
    std::cout << "config: subcommand=fit table=" << a.table << " K=" << a.order << " kind=" << a.kind
              << " min_n=" << a.min_n << " weighted=" << (a.weighted ? 1 : 0) << " out=" << a.out
              << " plot_prefix=" << prefix << '\n';

    jb::SurfaceFitOptions options;
    options.order = a.order;
    options.min_n = a.min_n;
    options.weighted = a.weighted;

    std::vector<jb::SurfaceFit> fits;
    for (auto kind : kinds) {
        for (const auto& tok : split_list(a.p)) {
            const double p = jb::text::parse_double(tok);
            jb::SurfaceFit fit;
            try {
                fit = jb::fit_surface(table, kind, p, options);
            } catch (const jb::NumericError& e) {
                throw jb::NumericError(std::string(e.what()) + " (kind=" + std::string(jb::to_string(kind)) +
                                       " p=" + format_shortest(p) + " K=" + std::to_string(a.order) + ")");
            }
            std::cout << jb::to_string(kind) << " p=" << format_shortest(p) << " K=" << fit.order
                      << " points=" << fit.points << " rms_residual=" << format_exact(fit.rms_residual)
                      << " max_residual=" << format_exact(fit.max_residual) << '\n';

            const std::string plot_path =
                prefix + "_" + std::string(jb::to_string(kind)) + "_p" + format_shortest(p) + ".csv";
            std::ofstream plot(plot_path, std::ios::binary | std::ios::trunc);
            if (!plot) throw jb::DataError("cannot write plot data '" + plot_path + "'");
            plot << "n,observed,fitted\n";
            const std::size_t pi = table.find_p(p);
            for (std::size_t j = 0; j < table.n_count(); ++j) {
                const auto n = table.n_grid()[j];
                plot << n << ',' << format_exact(table.quantile(kind, pi, j)) << ','
                     << format_exact(jb::eval_surface(fit, jb::SampleSize::finite(n))) << '\n';
            }
            fits.push_back(std::move(fit));
        }
    }
    std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
    if (!out) throw jb::DataError("cannot write fit file '" + a.out + "'");
    jb::save_fits(fits, out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-sample Jarque-Bera LM/ALM tables, p-values, quantiles and response surfaces"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo null quantile table");
    simulate->add_option("--preset", sim.preset, "paper (default grids, R=1e6) or quick (5 sizes, R=1e5)");
    simulate->add_option("--n", sim.n_grid, "sample sizes, comma separated")->delimiter(',');
    simulate->add_option("--p-grid", sim.p_grid, "'default' or probabilities, comma separated");
    simulate->add_option("--replications", sim.replications, "replications per sample size (1e5 style accepted)");
    simulate->add_option("--seed", sim.seed, "64-bit seed");
    simulate->add_option("--generator", sim.generator, "philox4x32-10 or mlfg-1279");
    simulate->add_option("--chunk-size", sim.chunk_size, "replications per random stream");
    simulate->add_option("--workers", sim.workers, "OpenMP threads (does not change results)");
    simulate->add_option("--out", sim.out, "table file to write")->required();
    simulate->add_flag("--progress", sim.progress, "progress on standard error");

    std::vector<std::string> diag_n;
    std::string diag_r = "1000000";
    std::uint64_t diag_seed = 0;
    std::string diag_gen = "philox4x32-10";
    std::uint64_t diag_chunk = 10'000;
    int diag_workers = 0;
    auto* diagnose = app.add_subcommand("diagnose", "Monte Carlo moments of b1, b2 against exact values");
    diagnose->add_option("--n", diag_n, "sample sizes")->required()->delimiter(',');
    diagnose->add_option("--replications", diag_r);
    diagnose->add_option("--seed", diag_seed);
    diagnose->add_option("--generator", diag_gen);
    diagnose->add_option("--chunk-size", diag_chunk);
    diagnose->add_option("--workers", diag_workers);

    std::vector<std::string> pv_q, qt_p;
    std::string pv_n = "inf", pv_kind = "LM", pv_table;
    int pv_digits = 7;
    auto* pvalue = app.add_subcommand("pvalue", "distribution function P(S <= q)");
    pvalue->add_option("--q", pv_q, "statistic values")->required();
    pvalue->add_option("--n", pv_n, "sample size or 'inf'");
    pvalue->add_option("--kind", pv_kind, "LM or ALM");
    pvalue->add_option("--table", pv_table, "table file (required for finite n)");
    pvalue->add_option("--digits", pv_digits, "significant digits; 0 = shortest exact");

    std::string qt_n = "inf", qt_kind = "LM", qt_table;
    int qt_digits = 7;
    auto* quantile = app.add_subcommand("quantile", "quantile function");
    quantile->add_option("--p", qt_p, "probabilities")->required();
    quantile->add_option("--n", qt_n, "sample size or 'inf'");
    quantile->add_option("--kind", qt_kind, "LM or ALM");
    quantile->add_option("--table", qt_table, "table file (required for finite n)");
    quantile->add_option("--digits", qt_digits, "significant digits; 0 = shortest exact");

    std::string test_data, test_table, test_kind = "both";
    auto* test = app.add_subcommand("test", "Jarque-Bera test of a data file (one observation per line)");
    test->add_option("--data", test_data, "data file")->required();
    test->add_option("--table", test_table, "table file for finite-sample p-values");
    test->add_option("--kind", test_kind, "LM, ALM or both");

    FitArgs fit;
    auto* fitcmd = app.add_subcommand("fit", "response surface q(p,N) = q(p,inf) + sum beta_k N^-k");
    fitcmd->add_option("--table", fit.table, "table file")->required();
    fitcmd->add_option("--p", fit.p, "grid probabilities")->required();
    fitcmd->add_option("--K", fit.order, "series order");
    fitcmd->add_option("--kind", fit.kind, "LM, ALM or both");
    fitcmd->add_option("--min-n", fit.min_n, "exclude smaller sample sizes from the fit");
    fitcmd->add_flag("--weighted", fit.weighted, "weight by inverse squared MC standard error");
    fitcmd->add_option("--out", fit.out, "fit file to write")->required();
    fitcmd->add_option("--plot-prefix", fit.plot_prefix, "prefix for n,observed,fitted CSV files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*simulate) return cmd_simulate(sim);
        if (*diagnose) return cmd_diagnose(diag_n, diag_r, diag_seed, diag_gen, diag_chunk, diag_workers);
        if (*pvalue) return cmd_pvalue(pv_q, pv_n, pv_kind, pv_table, pv_digits);
        if (*quantile) return cmd_quantile(qt_p, qt_n, qt_kind, qt_table, qt_digits);
        if (*test) return cmd_test(test_data, test_table, test_kind);
        if (*fitcmd) return cmd_fit(fit);
    } catch (const jb::InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const jb::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const jb::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}
