#include "jb/table_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "jb/errors.hpp"
#include "jb/rng.hpp"
#include "jb/text_format.hpp"

namespace jb {
namespace {

constexpr std::string_view kMagic = "jbtable";
constexpr std::string_view kQuantileEstimator = "order-statistic-linear-h=(R-1)p";

template <class T, class F>
std::string join(const std::vector<T>& values, F&& format) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format(values[i]);
    }
    return out;
}

std::string body_text(const QuantileTable& t) {
    std::string body;
    for (const char* section : {"quantile", "stderr"}) {
        const bool quantiles = std::string_view(section) == "quantile";
        for (StatisticKind kind : kAllKinds) {
            for (std::size_t i = 0; i < t.p_count(); ++i) {
                body += section;
                body += ',';
                body += to_string(kind);
                body += ',';
                body += text::format_shortest(t.p_grid()[i]);
                for (std::size_t j = 0; j < t.n_count(); ++j) {
                    body += ',';
                    body += text::format_exact(quantiles ? t.quantile(kind, i, j) : t.std_error(kind, i, j));
                }
                body += '\n';
            }
        }
    }
    return body;
}

[[noreturn]] void corrupt(const std::string& what) { throw DataError("corrupt table: " + what); }

const std::string& require(const std::map<std::string, std::string, std::less<>>& header, std::string_view key) {
    const auto it = header.find(key);
    if (it == header.end()) corrupt("missing header key '" + std::string(key) + "'");
    return it->second;
}

}  // namespace

void save_table(const QuantileTable& t, std::ostream& out) {
    out << table_to_string(t);
    if (!out) throw DataError("failed to write table");
}

std::string table_to_string(const QuantileTable& t) {
    const SimConfig& cfg = t.config();
    std::string s;
    s += kMagic;
    s += "\nformat_version=" + std::to_string(kFormatVersion);
    s += "\ngenerator=" + std::string(to_string(cfg.generator));
    s += "\nlag_pair=" + std::string(lag_pair_name(cfg.generator));
    s += "\nseeding=" + std::string(seeding_name(cfg.generator));
    s += "\nuniform=" + std::string(kUniformMappingName);
    s += "\ntransform=" + std::string(kNormalTransformName);
    s += "\nquantile_estimator=" + std::string(kQuantileEstimator);
    s += "\nseed=" + std::to_string(cfg.seed);
    s += "\nchunk_size=" + std::to_string(cfg.chunk_size);
    s += "\nreplications=" + std::to_string(cfg.replications);
    s += "\nkinds=LM,ALM";
    s += "\nn_grid=" + join(cfg.n_grid, [](std::int64_t n) { return std::to_string(n); });
    s += "\np_grid=" + join(cfg.p_grid, [](double p) { return text::format_shortest(p); });
    s += "\n[body]\n";
    const std::string body = body_text(t);
    s += body;
    s += "[end]\nchecksum=fnv1a64:" + text::hex64(text::fnv1a64(body)) + "\n";
    return s;
}

QuantileTable table_from_string(const std::string& text) {
    std::istringstream in(text);
    return load_table(in);
}

QuantileTable load_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMagic) throw DataError("unsupported format: missing 'jbtable' magic line");
    if (!std::getline(in, line) || line.rfind("format_version=", 0) != 0) {
        throw DataError("unsupported format: missing format_version");
    }
    const std::string version = line.substr(15);
    if (version != std::to_string(kFormatVersion)) {
        throw DataError("unsupported format: format_version=" + version);
    }

    std::map<std::string, std::string, std::less<>> header;
    while (std::getline(in, line) && line != "[body]") {
        const auto eq = line.find('=');
        if (eq == std::string::npos) corrupt("malformed header line '" + line + "'");
        header[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (line != "[body]") corrupt("missing [body]");

    std::string body;
    std::vector<std::string> rows;
    bool ended = false;
    while (std::getline(in, line)) {
        if (line == "[end]") {
            ended = true;
            break;
        }
        body += line;
        body += '\n';
        rows.push_back(line);
    }
    if (!ended) corrupt("missing [end]");
    if (!std::getline(in, line) || line.rfind("checksum=fnv1a64:", 0) != 0) corrupt("missing checksum");
    if (line.substr(17) != text::hex64(text::fnv1a64(body))) corrupt("checksum mismatch");

    SimConfig cfg;
    try {
        const std::string generator = require(header, "generator");
        try {
            cfg.generator = parse_generator(generator);
        } catch (const InvalidArgument&) {
            throw DataError("unsupported format: unknown generator '" + generator + "'");
        }
        if (require(header, "transform") != kNormalTransformName ||
            require(header, "uniform") != kUniformMappingName ||
            require(header, "lag_pair") != lag_pair_name(cfg.generator)) {
            throw DataError("unsupported format: unknown generator metadata");
        }
        if (require(header, "kinds") != "LM,ALM") throw DataError("unsupported format: kinds must be LM,ALM");
        cfg.seed = text::parse_uint(require(header, "seed"));
        cfg.chunk_size = text::parse_uint(require(header, "chunk_size"));
        cfg.replications = text::parse_uint(require(header, "replications"));
        for (auto tok : text::split(require(header, "n_grid"), ',')) cfg.n_grid.push_back(text::parse_int(tok));
        for (auto tok : text::split(require(header, "p_grid"), ',')) cfg.p_grid.push_back(text::parse_double(tok));
    } catch (const InvalidArgument& e) {
        corrupt(e.what());
    }
    try {
        validate_config(cfg, false);
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("invalid table: ") + e.what());
    }

    QuantileTable table(cfg);
    const std::size_t expected_rows = 4 * cfg.p_grid.size();
    if (rows.size() != expected_rows) corrupt("expected " + std::to_string(expected_rows) + " body rows");
    std::size_t row = 0;
    for (const char* section : {"quantile", "stderr"}) {
        const bool quantiles = std::string_view(section) == "quantile";
        for (StatisticKind kind : kAllKinds) {
            for (std::size_t i = 0; i < cfg.p_grid.size(); ++i, ++row) {
                const auto fields = text::split(rows[row], ',');
                if (fields.size() != 3 + cfg.n_grid.size() || fields[0] != section || fields[1] != to_string(kind)) {
                    corrupt("malformed body row " + std::to_string(row + 1));
                }
                try {
                    if (text::parse_double(fields[2]) != cfg.p_grid[i]) corrupt("body row p does not match p_grid");
                    for (std::size_t j = 0; j < cfg.n_grid.size(); ++j) {
                        const double v = text::parse_double(fields[3 + j]);
                        (quantiles ? table.quantile(kind, i, j) : table.std_error(kind, i, j)) = v;
                    }
                } catch (const InvalidArgument& e) {
                    corrupt(e.what());
                }
            }
        }
    }
    validate_table(table);
    return table;
}

void save_table_file(const QuantileTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    save_table(table, out);
    out.close();
    if (!out) throw DataError("failed to write '" + path + "'");
}

QuantileTable load_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open table '" + path + "'");
    return load_table(in);
}

}  // namespace jb
