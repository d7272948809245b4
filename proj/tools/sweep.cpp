#include "sweep.hpp"

#include "xythermo/oracle.hpp"
#include "xythermo/spectrum.hpp"
#include "xythermo/thermometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace xythermo::cli {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

double parse_number(const std::string& s, const char* what) {
    double x = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(std::string("cannot parse ") + what + " '" + s + "'");
    return x;
}

} // namespace

std::vector<double> Axis::values() const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(steps));
    if (steps == 1) {
        v.push_back(start);
        return v;
    }
    for (int i = 0; i < steps; ++i) {
        const double f = static_cast<double>(i) / (steps - 1);
        if (log)
            v.push_back(start * std::pow(stop / start, f));
        else
            v.push_back(start + (stop - start) * f);
    }
    // Hit the end point exactly; pow and the affine form can be off by an ulp.
    v.back() = stop;
    return v;
}

std::string Axis::str() const {
    std::string s = format_number(start) + ":" + format_number(stop) + ":" + std::to_string(steps);
    return log ? s + ":log" : s;
}

Axis parse_axis(const std::string& text) {
    const auto parts = split(text, ':');
    Axis a;
    if (parts.size() == 1) {
        a.start = a.stop = parse_number(parts[0], "axis value");
    } else if (parts.size() == 3 || parts.size() == 4) {
        a.start = parse_number(parts[0], "axis start");
        a.stop = parse_number(parts[1], "axis stop");
        const double steps = parse_number(parts[2], "axis steps");
        if (steps != std::floor(steps) || steps < 1 || steps > 1e6)
            throw ConfigError("axis steps must be a positive integer in '" + text + "'");
        a.steps = static_cast<int>(steps);
        if (parts.size() == 4) {
            if (parts[3] != "log" && parts[3] != "lin")
                throw ConfigError("axis scale must be 'log' or 'lin' in '" + text + "'");
            a.log = parts[3] == "log";
        }
    } else {
        throw ConfigError("axis must be start:stop:steps[:log], got '" + text + "'");
    }
    if (!std::isfinite(a.start) || !std::isfinite(a.stop))
        throw ConfigError("axis end points must be finite in '" + text + "'");
    if (a.log && (a.start <= 0.0 || a.stop <= 0.0))
        throw ConfigError("log axis needs positive end points in '" + text + "'");
    return a;
}

void SweepConfig::validate() const {
    for (double g : gamma.values())
        if (g < -1.0 || g > 1.0)
            throw ConfigError("gamma must lie in [-1, 1], got " + format_number(g));
    for (double t : temp.values())
        if (!(t > 0.0))
            throw ConfigError("temperature must be positive, got " + format_number(t));
    if (sites < 4 || sites % 2 != 0)
        throw ConfigError("sites must be even and >= 4, got " + std::to_string(sites));
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw ConfigError("kappa must be positive");
    if (threads < 1)
        throw ConfigError("threads must be >= 1");
}

FaradaySetup SweepConfig::setup() const {
    FaradaySetup s;
    s.kappa = kappa;
    s.modulation = modulation;
    s.include_shot_noise = shot_noise;
    return s;
}

json SweepConfig::to_json() const {
    return json{{"gamma", gamma.str()},
                {"field", field.str()},
                {"temp", temp.str()},
                {"sites", sites},
                {"kappa", kappa},
                {"modulation", to_string(modulation)},
                {"shot_noise", shot_noise},
                {"obs", obs},
                {"format", format == Format::csv ? "csv" : "json"},
                {"threads", threads}};
}

SweepConfig config_from_json(const json& j, SweepConfig base) {
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    SweepConfig c = std::move(base);
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "gamma")
                c.gamma = parse_axis(value.get<std::string>());
            else if (key == "field")
                c.field = parse_axis(value.get<std::string>());
            else if (key == "temp")
                c.temp = parse_axis(value.get<std::string>());
            else if (key == "sites")
                c.sites = value.get<int>();
            else if (key == "kappa")
                c.kappa = value.get<double>();
            else if (key == "modulation")
                c.modulation = parse_modulation(value.get<std::string>());
            else if (key == "shot_noise")
                c.shot_noise = value.get<bool>();
            else if (key == "obs")
                c.obs = value.get<std::string>();
            else if (key == "out")
                c.out = value.get<std::string>();
            else if (key == "format") {
                const auto f = value.get<std::string>();
                if (f != "csv" && f != "json")
                    throw ConfigError("format must be csv or json");
                c.format = f == "csv" ? Format::csv : Format::json;
            } else if (key == "threads")
                c.threads = value.get<int>();
            else if (key == "resume")
                c.resume = value.get<std::string>();
            else
                throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

SweepConfig load_config(const std::string& path, SweepConfig base) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j, std::move(base));
}

SweepConfig defaults_for(const std::string& command) {
    SweepConfig c;
    if (command == "phase-diagram") {
        c.gamma = {-1.0, 1.0, 41, false};
        c.field = {-2.0, 2.0, 41, false};
        c.temp = {0.05, 0.05, 1, false};
    } else if (command == "tscan") {
        c.temp = {0.1, 5.0, 50, true};
    } else if (command == "dispersion") {
        c.obs = "dispersion";
    } else if (command == "validate") {
        c.sites = 8;
    }
    return c;
}

std::string format_number(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc())
        throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

void write_csv_header(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<double>& row) {
    for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
}

void write_csv(std::ostream& os, const Table& t) {
    write_csv_header(os, t);
    for (const auto& r : t.rows)
        write_csv_row(os, r);
}

void write_json(std::ostream& os, const Table& t, const json& metadata) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json row = json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            row[t.columns[i]] = r[i];
        rows.push_back(std::move(row));
    }
    json doc{{"metadata", metadata}, {"columns", t.columns}, {"rows", std::move(rows)}};
    os << doc.dump(2) << '\n';
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path, const std::vector<std::string>& columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open resume file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::vector<double>> rows;
    if (text.empty())
        return rows;
    const bool complete_tail = text.back() == '\n';
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty())
        lines.pop_back();
    if (lines.empty() || split(lines[0], ',') != columns)
        throw ConfigError("resume file " + path + " has a different column layout");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        // An interrupted run can leave a truncated last line.
        if (i + 1 == lines.size() && !complete_tail)
            break;
        const auto cells = split(lines[i], ',');
        if (cells.size() != columns.size())
            throw ConfigError("malformed row " + std::to_string(i) + " in " + path);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(parse_number(c, "resume cell"));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

// Evaluates fn(i) for i in [0, count) on `threads` workers and hands results
// to `done` strictly in index order, so output never depends on scheduling.
template <class Fn, class Done>
void ordered_map(std::size_t count, int threads, Fn fn, Done done) {
    std::vector<std::optional<std::vector<double>>> slots(count);
    std::mutex m;
    std::size_t next_emit = 0;
    std::exception_ptr failure;
    bool stop = false;

    auto flush = [&] {
        while (next_emit < count && slots[next_emit]) {
            done(next_emit, *slots[next_emit]);
            ++next_emit;
        }
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(count, 1));
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < count; i += workers) {
                    {
                        std::lock_guard lock(m);
                        if (stop)
                            return;
                    }
                    try {
                        auto row = fn(i);
                        std::lock_guard lock(m);
                        slots[i] = std::move(row);
                        flush();
                    } catch (...) {
                        std::lock_guard lock(m);
                        if (!failure)
                            failure = std::current_exception();
                        stop = true;
                        return;
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

void report(const RowStream& stream, std::size_t i, std::size_t total, const std::vector<double>& row,
            bool resumed) {
    if (stream.rows)
        write_csv_row(*stream.rows, row), stream.rows->flush();
    if (stream.progress)
        *stream.progress << '[' << i + 1 << '/' << total << "] gamma=" << format_number(row[0])
                         << " field=" << format_number(row[1]) << " T=" << format_number(row[2])
                         << (resumed ? " (resumed)" : "") << '\n';
}

struct GridPoint {
    double gamma;
    double field;
    double temp;
};

std::vector<GridPoint> grid(const SweepConfig& cfg) {
    std::vector<GridPoint> pts;
    for (double g : cfg.gamma.values())
        for (double h : cfg.field.values())
            for (double t : cfg.temp.values())
                pts.push_back({g, h, t});
    return pts;
}

void require_obs(const std::string& obs, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (obs == a)
            return;
    std::string list;
    for (const char* a : allowed)
        list += list.empty() ? a : std::string(", ") + a;
    throw ConfigError("obs '" + obs + "' not supported here (expected one of " + list + ")");
}

} // namespace

Table cmd_dispersion(const SweepConfig& cfg) {
    cfg.validate();
    require_obs(cfg.obs, {"dispersion", "gap", "all"});
    Table t;
    const bool gap_only = cfg.obs == "gap";
    t.columns = gap_only ? std::vector<std::string>{"gamma", "field_ratio", "gap"}
                         : std::vector<std::string>{"gamma", "field_ratio", "k", "epsilon"};
    for (double g : cfg.gamma.values()) {
        for (double h : cfg.field.values()) {
            const ChainSpec spec(g, h, cfg.sites);
            if (gap_only) {
                t.rows.push_back({g, h, energy_gap(spec)});
                continue;
            }
            const ModeTable modes = mode_table(spec);
            for (std::size_t i = 0; i < modes.size(); ++i)
                t.rows.push_back({g, h, modes.momenta[i], modes.energies[i]});
        }
    }
    return t;
}

std::vector<std::string> phase_diagram_columns() {
    return {"gamma", "field_ratio", "temperature", "snr_crb_per_site", "snr_varjx_per_site", "snr_meanjz_per_site"};
}

Table cmd_phase_diagram(const SweepConfig& cfg, const std::vector<std::vector<double>>& resumed, RowStream stream) {
    cfg.validate();
    require_obs(cfg.obs, {"all", "crb", "varjx", "meanjz"});
    const bool want_varjx = cfg.obs == "all" || cfg.obs == "varjx";
    const bool want_meanjz = cfg.obs == "all" || cfg.obs == "meanjz";
    const FaradaySetup setup = cfg.setup();
    const auto pts = grid(cfg);

    std::map<std::tuple<double, double, double>, std::vector<double>> previous;
    for (const auto& r : resumed)
        previous.emplace(std::make_tuple(r[0], r[1], r[2]), r);

    Table t;
    t.columns = phase_diagram_columns();
    t.rows.resize(pts.size());
    std::vector<char> was_resumed(pts.size(), 0);

    ordered_map(
        pts.size(), cfg.threads,
        [&](std::size_t i) {
            const auto& p = pts[i];
            if (auto it = previous.find({p.gamma, p.field, p.temp}); it != previous.end()) {
                was_resumed[i] = 1;
                return it->second;
            }
            const ChainSpec spec(p.gamma, p.field, cfg.sites);
            const double n = cfg.sites;
            const double crb = snr_crb(ThermalEnsemble(spec, p.temp)) / n;
            const double vx =
                want_varjx ? temperature_snr(spec, p.temp, setup, ReadoutObservable::VarJx) / n : 0.0;
            const double mz =
                want_meanjz ? temperature_snr(spec, p.temp, setup, ReadoutObservable::MeanJz) / n : 0.0;
            return std::vector<double>{p.gamma, p.field, p.temp, crb, vx, mz};
        },
        [&](std::size_t i, const std::vector<double>& row) {
            t.rows[i] = row;
            report(stream, i, pts.size(), row, was_resumed[i] != 0);
        });
    return t;
}

Table cmd_tscan(const SweepConfig& cfg, RowStream stream) {
    cfg.validate();
    require_obs(cfg.obs, {"all", "crb", "varjx", "meanjz"});
    const bool want_varjx = cfg.obs == "all" || cfg.obs == "varjx";
    const bool want_meanjz = cfg.obs == "all" || cfg.obs == "meanjz";
    const FaradaySetup setup = cfg.setup();
    const auto pts = grid(cfg);

    Table t;
    t.columns = {"gamma",      "field_ratio", "temperature", "sites",      "var_jx_per_site_shot",
                 "mean_jz_per_sqrt_site", "snr_crb", "snr_varjx", "snr_meanjz"};
    t.rows.resize(pts.size());
    ordered_map(
        pts.size(), cfg.threads,
        [&](std::size_t i) {
            const auto& p = pts[i];
            const ChainSpec spec(p.gamma, p.field, cfg.sites);
            const ThermalEnsemble ens(spec, p.temp);
            const double n = cfg.sites;
            const double vx = var_jx(CorrelationKernel(ens));
            const double mz = mean_jz(ens, cfg.modulation);
            return std::vector<double>{
                p.gamma,
                p.field,
                p.temp,
                n,
                vx / n / input_quadrature_variance,
                mz / std::sqrt(n),
                snr_crb(ens),
                want_varjx ? temperature_snr(spec, p.temp, setup, ReadoutObservable::VarJx) : 0.0,
                want_meanjz ? temperature_snr(spec, p.temp, setup, ReadoutObservable::MeanJz) : 0.0,
            };
        },
        [&](std::size_t i, const std::vector<double>& row) {
            t.rows[i] = row;
            report(stream, i, pts.size(), row, false);
        });
    return t;
}

namespace {

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1.0);
}

} // namespace

ValidationResult cmd_validate(const SweepConfig& cfg) {
    if (cfg.sites < 4 || cfg.sites > 10 || cfg.sites % 2)
        throw ConfigError("validate runs the dense oracle; sites must be even in [4, 10]");
    constexpr double qfi_tol = 1e-10;
    constexpr double moment_tol = 1e-8;
    ValidationResult res;
    res.table.columns = {"gamma",          "field_ratio",     "temperature",    "qfi_rel_err",
                         "var_jx_rel_err", "mean_jz_rel_err", "var_jz_rel_err", "fourth_jx_rel_err"};
    for (double g : {0.0, 0.3, 0.5, 1.0}) {
        for (double h : {0.0, 0.5, 1.0, 1.5}) {
            const ChainSpec spec(g, h, cfg.sites);
            const auto sys = oracle::build(spec, oracle::Sector::antiperiodic_matched);
            for (double t : {0.1, 0.3, 1.0}) {
                const ThermalEnsemble ens(spec, t);
                const auto ref = oracle::collective_moments(sys, t, cfg.modulation);
                const auto got = moments(ens, cfg.modulation);
                const double oq = oracle::oracle_qfi(sys, t);
                std::vector<double> row{g,
                                        h,
                                        t,
                                        std::abs(qfi(ens) - oq) / oq,
                                        rel_err(got.var_jx, ref.var_jx),
                                        rel_err(got.mean_jz, ref.mean_jz),
                                        rel_err(got.var_jz, ref.var_jz),
                                        rel_err(got.fourth_jx, ref.fourth_jx)};
                if (!(row[3] < qfi_tol))
                    res.passed = false;
                for (std::size_t c = 4; c < row.size(); ++c)
                    if (!(row[c] < moment_tol))
                        res.passed = false;
                res.table.rows.push_back(std::move(row));
            }
        }
    }
    return res;
}

} // namespace xythermo::cli
