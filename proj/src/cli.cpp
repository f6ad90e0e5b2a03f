#include <fran/cli.hpp>
#include <fran/errors.hpp>
#include <fran/text.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fran {

namespace {

std::vector<double> grid(double first, double step, std::size_t count)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
        // Round to 1e-12 so the CSV shows 0.06 rather than 0.060000000000000005.
        out.push_back(std::round((first + step * static_cast<double>(i)) * 1e12) / 1e12);
    }
    return out;
}

void append(std::vector<MetricRow>& to, const std::vector<MetricRow>& from)
{
    to.insert(to.end(), from.begin(), from.end());
}

std::size_t fast_gate_violations(const MetricsReport& report)
{
    std::size_t n = 0;
    for (const auto& pr : report.records) {
        if (pr.variant.rfind("fran", 0) != 0) {
            continue;
        }
        for (const auto& r : pr.replications) {
            n += r.fast_mrrh_to_fap;
        }
    }
    return n;
}

PropertyCheck gate_check(std::size_t violations)
{
    return {"fran speed gate: no MRRH->F-AP handover of an above-threshold F-UE", violations == 0,
            violations == 0 ? "" : std::to_string(violations) + " gated handovers executed"};
}

void overhead_checks(ExperimentOutput& out, const MetricsReport& report, const SimConfig& config)
{
    for (const char* procedure : {"fran", "non_fran"}) {
        out.checks.push_back(check_increasing(out.rows, procedure, "overhead_rate"));
    }
    out.checks.push_back(check_below(out.rows, "fran", "non_fran", "overhead_rate", true, true));
    for (auto kind : {HandoverKind::fap_to_fap, HandoverKind::fap_to_mrrh}) {
        if (!config.mix.contains(kind) || config.mix.at(kind) <= 0.0) {
            continue;
        }
        const std::string metric = "overhead_rate." + std::string(to_string(kind));
        out.checks.push_back(check_below(out.rows, "fran", "non_fran", metric, true, true));
    }
    out.fast_mrrh_to_fap = fast_gate_violations(report);
    out.checks.push_back(gate_check(out.fast_mrrh_to_fap));
}

void collect_games(ExperimentOutput& out, const MetricsReport& report)
{
    for (const auto& pr : report.records) {
        for (const auto& r : pr.replications) {
            out.game_rows.insert(out.game_rows.end(), r.game_rows.begin(), r.game_rows.end());
        }
    }
}

void progress_line(std::ostream* progress, const std::string& text)
{
    if (progress != nullptr) {
        *progress << text << std::endl;
    }
}

} // namespace

std::string_view to_string(Experiment e) noexcept
{
    switch (e) {
    case Experiment::fig4:
        return "fig4";
    case Experiment::fig5:
        return "fig5";
    case Experiment::fig6:
        return "fig6";
    case Experiment::custom:
        return "custom";
    }
    return "?";
}

Experiment parse_experiment(std::string_view name)
{
    for (auto e : {Experiment::fig4, Experiment::fig5, Experiment::fig6, Experiment::custom}) {
        if (to_string(e) == name) {
            return e;
        }
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "' (expected fig4, fig5, fig6 or custom)");
}

std::vector<double> fig4_arrival_rates()
{
    return grid(0.02, 0.04, 8);
}

std::vector<double> fig5_holding_times()
{
    return grid(1.0, 1.0, 10);
}

std::vector<double> fig6_fues_per_fap()
{
    return grid(1.0, 1.0, 8);
}

ExperimentOutput run_experiment_spec(Experiment experiment, const ParsedConfig& config, std::ostream* progress)
{
    ExperimentOutput out;
    const SimConfig& base = config.sim;
    out.metadata = {{"experiment", std::string(to_string(experiment))},
                    {"seed", std::to_string(base.seed)},
                    {"replications", std::to_string(base.replications)},
                    {"horizon", format_number(base.horizon)}};

    switch (experiment) {
    case Experiment::fig4: {
        progress_line(progress, "fig4: overhead vs arrival rate");
        const auto report = run_experiment(base, {SweepParam::arrival_rate, fig4_arrival_rates()}, Study::overhead);
        out.rows = report.rows;
        out.metadata.emplace_back("mean_holding_time", format_number(base.session.mean_holding_time));
        out.metadata.emplace_back("residence_rate", format_number(base.session.residence_rate));
        overhead_checks(out, report, base);
        break;
    }
    case Experiment::fig5: {
        progress_line(progress, "fig5: overhead vs mean holding time");
        SimConfig c = base;
        c.session.arrival_rate = kFig5ArrivalRate;
        const auto report = run_experiment(c, {SweepParam::mean_holding_time, fig5_holding_times()}, Study::overhead);
        out.rows = report.rows;
        out.metadata.emplace_back("arrival_rate", format_number(c.session.arrival_rate));
        out.metadata.emplace_back("residence_rate", format_number(c.session.residence_rate));
        overhead_checks(out, report, c);
        break;
    }
    case Experiment::fig6: {
        std::vector<std::string> proposed_curves;
        for (auto n_faps : kFig6FapCounts) {
            progress_line(progress, "fig6: n_faps=" + std::to_string(n_faps));
            SimConfig c = base;
            c.topology.n_faps = n_faps;
            const std::string suffix = "/n_faps=" + std::to_string(n_faps);
            const auto report =
                run_experiment(c, {SweepParam::n_fues_per_fap, fig6_fues_per_fap()}, Study::utility, suffix);
            append(out.rows, report.rows);
            collect_games(out, report);
            out.checks.push_back(check_below(out.rows, "existing_fran" + suffix, "proposed" + suffix,
                                             "total_net_utility", false, false));
            out.checks.push_back(check_below(out.rows, "non_fran" + suffix, "existing_fran" + suffix,
                                             "total_net_utility", false, false));
            out.checks.push_back(
                check_below(out.rows, "non_fran" + suffix, "proposed" + suffix, "total_net_utility", true, true));
            out.checks.push_back(check_increasing(out.rows, "proposed" + suffix, "total_net_utility", 1));
            proposed_curves.push_back("proposed" + suffix);
        }
        // Across F-AP counts at each F-UE count.
        PropertyCheck by_faps{"proposed total_net_utility increasing in n_faps", true, {}};
        for (double v : fig6_fues_per_fap()) {
            double prev = -INFINITY;
            for (const auto& variant : proposed_curves) {
                for (const auto& r : out.rows) {
                    if (r.variant == variant && r.sweep_value == v && r.metric == "total_net_utility") {
                        if (!(r.mean > prev)) {
                            by_faps.passed = false;
                            by_faps.detail += "at n_fues_per_fap=" + format_number(v) + "; ";
                        }
                        prev = r.mean;
                    }
                }
            }
        }
        out.checks.push_back(by_faps);
        break;
    }
    case Experiment::custom: {
        if (!config.sweep) {
            throw ConfigError("custom experiment needs a [sweep] section with param and values");
        }
        const Study study = config.study.value_or(Study::overhead);
        progress_line(progress, "custom: sweep " + std::string(to_string(config.sweep->param)));
        const auto report = run_experiment(base, *config.sweep, study);
        out.rows = report.rows;
        if (study == Study::overhead) {
            overhead_checks(out, report, base);
        } else {
            collect_games(out, report);
        }
        break;
    }
    }
    return out;
}

int run(const RunSpec& spec, std::ostream& err)
{
    std::vector<std::filesystem::path> written;
    try {
        ParsedConfig config;
        if (spec.config_path) {
            config = parse_config_file(*spec.config_path);
        } else {
            std::istringstream empty;
            config = parse_config_text(empty);
        }
        if (spec.seed) {
            config.sim.seed = *spec.seed;
        }
        if (spec.replications) {
            config.sim.replications = *spec.replications;
        }
        config.sim.validate();

        std::filesystem::create_directories(spec.output_dir);
        const auto out = run_experiment_spec(spec.experiment, config, spec.quiet ? nullptr : &err);

        const std::string name(to_string(spec.experiment));
        auto open = [&](const std::string& file) {
            const auto path = spec.output_dir / file;
            written.push_back(path);
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f) {
                throw IoError("cannot write '" + path.string() + "'");
            }
            return f;
        };
        {
            auto f = open(name + ".csv");
            write_metrics_csv(f, out.rows, out.metadata);
            if (!f) {
                throw IoError("write failed for " + name + ".csv");
            }
        }
        if (!out.game_rows.empty()) {
            auto f = open(name + "_games.csv");
            f << game_csv_header() << '\n';
            for (const auto& row : out.game_rows) {
                f << row << '\n';
            }
            if (!f) {
                throw IoError("write failed for " + name + "_games.csv");
            }
        }
        {
            auto f = open("summary.txt");
            write_summary(f, name + " (seed " + std::to_string(config.sim.seed) + ", " +
                                 std::to_string(config.sim.replications) + " replications)",
                          out.rows, out.checks);
            if (!f) {
                throw IoError("write failed for summary.txt");
            }
        }
        if (!spec.quiet) {
            for (const auto& c : out.checks) {
                err << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
            }
        }
        return 0;
    } catch (const std::exception& e) {
        for (const auto& p : written) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
        err << "fran-sim: error: " << e.what() << '\n';
        return 1;
    }
}

int cli_main(int argc, char** argv)
{
    CLI::App app{"Fog radio access network handover-overhead and uplink resource-allocation simulator"};
    std::string experiment = "fig4";
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    bool quiet = false;

    app.add_option("--experiment", experiment, "Experiment to run")
        ->check(CLI::IsMember({"fig4", "fig5", "fig6", "custom"}))
        ->capture_default_str();
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory")->envname("FRAN_OUT_DIR")->capture_default_str();
    app.add_option("--seed", seed, "Override the base seed");
    app.add_option("--reps", reps, "Override the replications per sweep point")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "Suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    RunSpec spec;
    spec.experiment = parse_experiment(experiment);
    if (!config_path.empty()) {
        spec.config_path = config_path;
    }
    spec.output_dir = out_dir;
    spec.seed = seed;
    spec.replications = reps;
    spec.quiet = quiet;
    return run(spec, std::cerr);
}

} // namespace fran
