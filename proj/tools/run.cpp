#include "sweep.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace xythermo::cli {

namespace {

struct Overrides {
    std::optional<std::string> gamma, field, temp, modulation, obs, out, format, resume, config;
    std::optional<int> sites, threads;
    std::optional<double> kappa;
    bool shot_noise = false;
};

void add_options(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON config file; flags override its keys");
    sub->add_option("--gamma", o.gamma, "anisotropy axis start:stop:steps[:log]");
    sub->add_option("--field", o.field, "h/J axis start:stop:steps[:log]");
    sub->add_option("--temp", o.temp, "T/J axis start:stop:steps[:log]");
    sub->add_option("--sites", o.sites, "chain length N (even)");
    sub->add_option("--kappa", o.kappa, "light-atom coupling");
    sub->add_option("--modulation", o.modulation, "probe pattern: uniform | half");
    sub->add_flag("--shot-noise", o.shot_noise, "add light shot noise to the J_z readout");
    sub->add_option("--obs", o.obs, "observables (all | crb | varjx | meanjz; dispersion | gap)");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", o.threads, "worker threads (THREADS env var if unset)");
    sub->add_option("--resume", o.resume, "partial phase-diagram CSV to continue from");
}

SweepConfig resolve(const std::string& command, const Overrides& o) {
    SweepConfig c = defaults_for(command);
    if (o.config)
        c = load_config(*o.config, c);
    if (o.gamma)
        c.gamma = parse_axis(*o.gamma);
    if (o.field)
        c.field = parse_axis(*o.field);
    if (o.temp)
        c.temp = parse_axis(*o.temp);
    if (o.sites)
        c.sites = *o.sites;
    if (o.kappa)
        c.kappa = *o.kappa;
    if (o.modulation) {
        try {
            c.modulation = parse_modulation(*o.modulation);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (o.shot_noise)
        c.shot_noise = true;
    if (o.obs)
        c.obs = *o.obs;
    if (o.out)
        c.out = *o.out;
    if (o.format)
        c.format = *o.format == "json" ? Format::json : Format::csv;
    if (o.resume)
        c.resume = *o.resume;
    if (o.threads) {
        c.threads = *o.threads;
    } else if (const char* env = std::getenv("THREADS"); env && *env) {
        try {
            c.threads = std::stoi(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string("THREADS must be an integer, got '") + env + "'");
        }
    }
    c.validate();
    return c;
}

int execute(const std::string& command, const SweepConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    std::ofstream file;
    if (!cfg.out.empty() && cfg.resume != cfg.out) {
        file.open(cfg.out, std::ios::binary);
        if (!file)
            throw ConfigError("cannot write " + cfg.out);
    }
    std::vector<std::vector<double>> resumed;
    if (!cfg.resume.empty()) {
        if (command != "phase-diagram")
            throw ConfigError("--resume is only supported by phase-diagram");
        if (cfg.format != Format::csv)
            throw ConfigError("--resume needs csv output");
        resumed = read_csv_rows(cfg.resume, phase_diagram_columns());
        if (!cfg.out.empty() && cfg.resume == cfg.out) {
            file.open(cfg.out, std::ios::binary | std::ios::trunc);
            if (!file)
                throw ConfigError("cannot write " + cfg.out);
        }
    }
    std::ostream& os = cfg.out.empty() ? std::cout : static_cast<std::ostream&>(file);

    Table table;
    bool ok = true;
    if (command == "dispersion") {
        table = cmd_dispersion(cfg);
    } else if (command == "validate") {
        auto res = cmd_validate(cfg);
        table = std::move(res.table);
        ok = res.passed;
        std::cerr << "oracle validation " << (ok ? "passed" : "FAILED") << '\n';
    } else if (command == "tscan") {
        table = cmd_tscan(cfg, RowStream{nullptr, &std::cerr});
    } else {
        RowStream stream{nullptr, &std::cerr};
        if (cfg.format == Format::csv) {
            // Rows go out as soon as they are final, so an interrupted run
            // leaves a resumable prefix.
            Table header;
            header.columns = phase_diagram_columns();
            write_csv_header(os, header);
            stream.rows = &os;
        }
        table = cmd_phase_diagram(cfg, resumed, stream);
        if (cfg.format == Format::csv)
            return 0;
    }

    if (cfg.format == Format::csv) {
        write_csv(os, table);
    } else {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        nlohmann::ordered_json meta{{"version", version}, {"command", command}, {"config", cfg.to_json()},
                            {"wall_time_s", wall}};
        write_json(os, table, meta);
    }
    return ok ? 0 : 3;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Thermometry of the transverse-field XY chain"};
    app.require_subcommand(1);
    Overrides o;
    const char* names[] = {"dispersion", "phase-diagram", "tscan", "validate"};
    const char* help[] = {"dispersion relation and gap", "SNR maps over (gamma, h/J)",
                          "temperature scans at fixed (gamma, h/J)", "compare against dense diagonalization"};
    for (int i = 0; i < 4; ++i)
        add_options(app.add_subcommand(names[i], help[i]), o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string command;
    for (const auto* sub : app.get_subcommands())
        command = sub->get_name();

    try {
        return execute(command, resolve(command, o));
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace xythermo::cli
