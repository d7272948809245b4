#pragma once

#include "xythermo/correlations.hpp"
#include "xythermo/faraday.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xythermo::cli {

inline constexpr const char* version = "0.1.0";

/// Bad flags, bad config file, values outside a module's domain. Exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// start:stop:steps[:log]. One step means just `start`.
struct Axis {
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;
    bool log = false;

    std::vector<double> values() const;
    std::string str() const;
};

Axis parse_axis(const std::string& text);

enum class Format { csv, json };

struct SweepConfig {
    Axis gamma{1.0, 1.0, 1, false};
    Axis field{0.0, 0.0, 1, false};
    Axis temp{0.5, 0.5, 1, false};
    int sites = 50;
    double kappa = 1.0;
    Modulation modulation = Modulation::uniform;
    bool shot_noise = false;
    /// Subcommand specific: "all", "crb", "varjx", "meanjz", "gap", "dispersion".
    std::string obs = "all";
    std::string out;
    Format format = Format::csv;
    int threads = 1;
    std::string resume;

    void validate() const;
    FaradaySetup setup() const;
    nlohmann::ordered_json to_json() const;
};

/// Keys mirror the long flag names without dashes (e.g. "shot_noise").
/// Unknown keys are rejected.
/// Unset keys keep the value from `base`.
SweepConfig config_from_json(const nlohmann::ordered_json& j, SweepConfig base = {});
SweepConfig load_config(const std::string& path, SweepConfig base = {});

/// Default grid and observable set for a subcommand.
SweepConfig defaults_for(const std::string& command);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const Table& t);
void write_csv_header(std::ostream& os, const Table& t);
void write_csv_row(std::ostream& os, const std::vector<double>& row);
/// {"metadata": ..., "columns": [...], "rows": [{...}, ...]}
void write_json(std::ostream& os, const Table& t, const nlohmann::ordered_json& metadata);

/// Rows of an earlier CSV run; columns must match `columns` exactly.
std::vector<std::vector<double>> read_csv_rows(const std::string& path, const std::vector<std::string>& columns);

/// Optional sink for rows as they become final, in table order.
struct RowStream {
    std::ostream* rows = nullptr;     ///< CSV rows (header written by the caller)
    std::ostream* progress = nullptr; ///< one line per finished grid point
};

/// (gamma, field_ratio, k, epsilon) over the N-site momentum grid, or
/// (gamma, field_ratio, gap) when obs == "gap".
Table cmd_dispersion(const SweepConfig& cfg);

std::vector<std::string> phase_diagram_columns();
/// (gamma, field_ratio, temperature, snr_crb_per_site, snr_varjx_per_site,
/// snr_meanjz_per_site). Readouts left out by `obs` are written as 0.
/// Rows found in `resumed` with the same (gamma, field_ratio, temperature)
/// are reused verbatim.
Table cmd_phase_diagram(const SweepConfig& cfg, const std::vector<std::vector<double>>& resumed = {},
                        RowStream stream = {});

/// Temperature scans at each (gamma, field_ratio): var_jx / N in units of the
/// shot noise 1/2, mean_jz / sqrt(N), then the three SNRs.
Table cmd_tscan(const SweepConfig& cfg, RowStream stream = {});

/// Library versus dense diagonalization on N = 8 chains. Rows hold relative
/// errors; `passed` reports whether every error is below tolerance.
struct ValidationResult {
    Table table;
    bool passed = true;
};
ValidationResult cmd_validate(const SweepConfig& cfg);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv);

} // namespace xythermo::cli
