#include <fran/errors.hpp>
#include <fran/report.hpp>
#include <fran/text.hpp>

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace fran {

namespace {

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(line);
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::vector<const MetricRow*> curve(const std::vector<MetricRow>& rows, const std::string& variant,
                                    const std::string& metric)
{
    std::vector<const MetricRow*> out;
    for (const auto& r : rows) {
        if (r.variant == variant && r.metric == metric) {
            out.push_back(&r);
        }
    }
    return out;
}

} // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows, const Metadata& metadata)
{
    for (const auto& [key, value] : metadata) {
        out << "# " << key << '=' << value << '\n';
    }
    out << kMetricsHeader << '\n';
    for (const auto& r : rows) {
        out << r.sweep_param << ',' << format_number(r.sweep_value) << ',' << r.variant << ',' << r.metric << ','
            << format_number(r.mean) << ',' << format_number(r.std_err) << ',' << r.n_reps << '\n';
    }
}

MetricsCsv read_metrics_csv(std::istream& in)
{
    MetricsCsv csv;
    std::string line;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!header && line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("metrics csv line " + std::to_string(line_no) + ": metadata without '='");
            }
            csv.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
            continue;
        }
        if (!header) {
            if (line != kMetricsHeader) {
                throw ConfigError("metrics csv: unexpected header '" + line + "'");
            }
            header = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 7) {
            throw ConfigError("metrics csv line " + std::to_string(line_no) + ": expected 7 fields");
        }
        MetricRow r;
        r.sweep_param = f[0];
        r.sweep_value = parse_number(f[1], "sweep_value");
        r.variant = f[2];
        r.metric = f[3];
        r.mean = parse_number(f[4], "mean");
        r.std_err = parse_number(f[5], "std_err");
        const double n = parse_number(f[6], "n_reps");
        if (!(n >= 0.0) || n != std::floor(n)) {
            throw ConfigError("metrics csv line " + std::to_string(line_no) + ": bad n_reps");
        }
        r.n_reps = static_cast<std::size_t>(n);
        csv.rows.push_back(std::move(r));
    }
    if (!header) {
        throw ConfigError("metrics csv: missing header");
    }
    return csv;
}

PropertyCheck check_increasing(const std::vector<MetricRow>& rows, const std::string& variant,
                               const std::string& metric, std::size_t allowed_drops)
{
    PropertyCheck c{variant + " " + metric + " increasing in sweep value", true, {}};
    const auto pts = curve(rows, variant, metric);
    std::size_t drops = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i]->mean > pts[i - 1]->mean)) {
            ++drops;
            c.detail += "drop at " + format_number(pts[i]->sweep_value) + "; ";
        }
    }
    if (pts.size() < 2) {
        c.passed = false;
        c.detail = "fewer than two points";
    } else {
        c.passed = drops <= allowed_drops;
    }
    if (allowed_drops > 0) {
        c.name += " (up to " + std::to_string(allowed_drops) + " non-increasing step allowed)";
    }
    return c;
}

PropertyCheck check_below(const std::vector<MetricRow>& rows, const std::string& lower_variant,
                          const std::string& upper_variant, const std::string& metric, bool strict, bool separated)
{
    PropertyCheck c{lower_variant + (strict ? " < " : " <= ") + upper_variant + " on " + metric +
                        (separated ? " (3-SE intervals disjoint)" : ""),
                    true,
                    {}};
    const auto lo = curve(rows, lower_variant, metric);
    const auto hi = curve(rows, upper_variant, metric);
    if (lo.empty() || lo.size() != hi.size()) {
        c.passed = false;
        c.detail = "curves missing or of different length";
        return c;
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const double a = lo[i]->mean;
        const double b = hi[i]->mean;
        bool ok = strict ? a < b : a <= b;
        if (separated) {
            ok = ok && (a + 3.0 * lo[i]->std_err < b - 3.0 * hi[i]->std_err);
        }
        if (!ok) {
            c.passed = false;
            c.detail += "fails at " + format_number(lo[i]->sweep_value) + "; ";
        }
    }
    return c;
}

void write_summary(std::ostream& out, const std::string& title, const std::vector<MetricRow>& rows,
                   const std::vector<PropertyCheck>& checks)
{
    out << title << "\n\n";
    out << std::left << std::setw(18) << "sweep_value" << std::setw(28) << "variant" << std::setw(30) << "metric"
        << "mean +- SE (n)\n";
    for (const auto& r : rows) {
        std::ostringstream v;
        v << std::setprecision(6) << r.mean << " +- " << r.std_err << " (" << r.n_reps << ")";
        out << std::left << std::setw(18) << format_number(r.sweep_value) << std::setw(28) << r.variant
            << std::setw(30) << r.metric << v.str() << '\n';
    }
    out << '\n';
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) {
            out << " -- " << c.detail;
        }
        out << '\n';
    }
}

} // namespace fran
