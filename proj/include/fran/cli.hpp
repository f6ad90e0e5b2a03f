#ifndef FRAN_CLI_HPP
#define FRAN_CLI_HPP

#include <fran/config.hpp>
#include <fran/report.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fran {

enum class Experiment
{
    fig4, // overhead vs arrival rate
    fig5, // overhead vs mean holding time at arrival rate 0.1
    fig6, // total net utility vs F-UEs per F-AP, for 10 / 20 / 40 F-APs
    custom,
};

std::string_view to_string(Experiment e) noexcept;
Experiment parse_experiment(std::string_view name);

struct RunSpec
{
    Experiment experiment = Experiment::fig4;
    std::optional<std::filesystem::path> config_path;
    std::filesystem::path output_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replications;
    bool quiet = false;
};

/// Operating point of the holding-time sweep.
inline constexpr double kFig5ArrivalRate = 0.1;
inline constexpr std::size_t kFig6FapCounts[] = {10, 20, 40};

std::vector<double> fig4_arrival_rates();
std::vector<double> fig5_holding_times();
std::vector<double> fig6_fues_per_fap();

struct ExperimentOutput
{
    std::vector<MetricRow> rows;
    Metadata metadata;
    std::vector<PropertyCheck> checks;
    /// Per-game CSV rows (utility studies only).
    std::vector<std::string> game_rows;
    /// Executed MRRH -> F-AP handovers of above-threshold F-UEs under FRAN.
    std::size_t fast_mrrh_to_fap = 0;
};

/// Runs one experiment in memory. `progress` may be null.
ExperimentOutput run_experiment_spec(Experiment experiment, const ParsedConfig& config, std::ostream* progress);

/// Runs the experiment and writes <experiment>.csv, summary.txt (and <experiment>_games.csv
/// for utility studies) into spec.output_dir. Returns the process exit status; diagnostics go to `err`.
int run(const RunSpec& spec, std::ostream& err);

/// Command-line front end shared by the executable.
int cli_main(int argc, char** argv);

} // namespace fran

#endif // FRAN_CLI_HPP
