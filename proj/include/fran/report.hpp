#ifndef FRAN_REPORT_HPP
#define FRAN_REPORT_HPP

#include <fran/sim_engine.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fran {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Column order of every metrics CSV.
inline constexpr const char* kMetricsHeader = "sweep_param,sweep_value,variant,metric,mean,std_err,n_reps";

/**
 * Metadata lines ("# key=value") come first, then the header, then one row per
 * MetricRow in report order. Numbers use the shortest round-trip form.
 */
void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows, const Metadata& metadata = {});

struct MetricsCsv
{
    Metadata metadata;
    std::vector<MetricRow> rows;
};

/// Inverse of write_metrics_csv; throws ConfigError on malformed input.
MetricsCsv read_metrics_csv(std::istream& in);

/// A named pass/fail property of an experiment, e.g. an ordering between curves.
struct PropertyCheck
{
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Strictly increasing means along the sweep for one (variant, metric).
PropertyCheck check_increasing(const std::vector<MetricRow>& rows, const std::string& variant,
                               const std::string& metric, std::size_t allowed_drops = 0);

/// lower < upper at every sweep value, with the 3-SE intervals disjoint when `separated`.
PropertyCheck check_below(const std::vector<MetricRow>& rows, const std::string& lower_variant,
                          const std::string& upper_variant, const std::string& metric, bool strict, bool separated);

/// Plain-text table of mean +- SE, followed by one PASS/FAIL line per check.
void write_summary(std::ostream& out, const std::string& title, const std::vector<MetricRow>& rows,
                   const std::vector<PropertyCheck>& checks);

} // namespace fran

#endif // FRAN_REPORT_HPP
