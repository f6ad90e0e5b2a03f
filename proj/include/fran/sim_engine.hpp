#ifndef FRAN_SIM_ENGINE_HPP
#define FRAN_SIM_ENGINE_HPP

#include <fran/allocation.hpp>
#include <fran/core_model.hpp>
#include <fran/handover.hpp>
#include <fran/ra_game.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fran {

enum class EventKind
{
    session_arrival,
    session_end,
    boundary_crossing,
    snapshot,
};

struct Event
{
    double time = 0.0;
    std::uint64_t sequence = 0; // insertion order, breaks time ties
    EventKind kind = EventKind::session_arrival;
    std::uint64_t subject = 0;  // session id, or snapshot index
};

struct SimConfig
{
    double horizon = 1e5;
    std::uint64_t seed = 1;
    SessionModel session;
    TopologyConfig topology;
    ChannelParams channel = ChannelParams::defaults();
    UtilityParams utility;
    PowerGrid grid = PowerGrid::defaults();
    GameSettings game;
    OverheadProfile overhead = OverheadProfile::defaults();
    Procedure procedure = Procedure::fran;
    double speed_threshold = 10.0;
    HandoverMix mix = {{HandoverKind::fap_to_fap, 0.5}, {HandoverKind::fap_to_mrrh, 0.3},
                       {HandoverKind::mrrh_to_fap, 0.2}};
    std::size_t replications = 30;
    std::size_t snapshots = 10;

    /// Defaults with the residence rate taken from the fluid-flow model of an F-AP cell.
    static SimConfig defaults();
    /// Mean F-UE speed under the two-point speed distribution.
    double mean_speed() const noexcept;
    /// Probability that a session's F-UE moves at or below the speed threshold.
    double slow_fraction() const noexcept;

    /// Checks every module-level invariant; throws ConfigError naming the key.
    void validate() const;
};

/// Per-handover trace cost for each kind under the configured procedure and profile.
HandoverCosts trace_costs(Procedure procedure, const OverheadProfile& profile);

/// Analytic overhead rate of the configured session process, including the FRAN speed gate.
double analytic_overhead_rate(const SimConfig& config);

struct ReplicationRecord
{
    std::uint64_t seed = 0;
    std::size_t sessions = 0;
    std::size_t handovers = 0;
    std::size_t scenario1 = 0;
    std::size_t scenario2 = 0;
    std::size_t crossings = 0;
    std::size_t gated = 0;
    /// Executed MRRH -> F-AP handovers of F-UEs faster than the threshold.
    std::size_t fast_mrrh_to_fap = 0;
    std::array<std::size_t, kAllHandoverKinds.size()> handovers_by_kind{};
    std::array<double, kAllHandoverKinds.size()> overhead_by_kind{};
    double processing_overhead = 0.0;
    double transmitting_overhead = 0.0;
    double overhead_rate = 0.0;
    double mean_interarrival = 0.0;
    std::size_t events = 0;
    bool causal = true;

    // Allocation games, averaged over snapshots; indexed by Scheme.
    std::array<double, 3> utility{};
    std::size_t games = 0;
    std::size_t games_converged = 0;
    std::size_t ne_checks = 0;
    std::size_t ne_failures = 0;
    std::size_t monotone_violations = 0;
    std::vector<std::string> game_rows;

    double overhead() const noexcept { return processing_overhead + transmitting_overhead; }
    double handovers_per_session() const noexcept
    {
        return sessions == 0 ? 0.0 : static_cast<double>(handovers) / static_cast<double>(sessions);
    }
    double overhead_rate_of(HandoverKind kind, double horizon) const noexcept
    {
        return overhead_by_kind[static_cast<std::size_t>(kind)] / horizon;
    }
};

/// One seeded run of the session process (arrivals before the horizon, each
/// followed to completion) plus `snapshots` allocation games. Deterministic in (config, seed).
ReplicationRecord run_replication(const SimConfig& config, std::uint64_t seed);

enum class SweepParam
{
    arrival_rate,
    mean_holding_time,
    n_fues_per_fap,
    n_faps,
};

std::string_view to_string(SweepParam param) noexcept;
SweepParam parse_sweep_param(std::string_view name);

struct Sweep
{
    SweepParam param = SweepParam::arrival_rate;
    std::vector<double> values;
};

enum class Study
{
    overhead, // session process under both procedures
    utility,  // allocation games, all three schemes
};

struct MetricRow
{
    std::string sweep_param;
    double sweep_value = 0.0;
    std::string variant;
    std::string metric;
    double mean = 0.0;
    double std_err = 0.0;
    std::size_t n_reps = 0;

    friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

struct PointRecords
{
    double sweep_value = 0.0;
    std::string variant;
    std::vector<ReplicationRecord> replications;
};

struct MetricsReport
{
    std::vector<MetricRow> rows;
    std::vector<PointRecords> records;

    /// Row lookup; throws std::out_of_range when absent.
    const MetricRow& find(double sweep_value, std::string_view variant, std::string_view metric) const;
};

struct Aggregate
{
    double mean = 0.0;
    double std_err = 0.0;
    std::size_t n = 0;
};

/// Sample mean and standard error (NaN standard error below two samples).
Aggregate aggregate(const std::vector<double>& samples);

SimConfig apply_sweep_value(SimConfig config, SweepParam param, double value);

/// Seed of replication `rep` at sweep point `point`.
std::uint64_t replication_seed(std::uint64_t base, std::size_t point, std::size_t rep) noexcept;

/**
 * Runs `config.replications` replications per sweep value. The overhead study
 * reports one variant per procedure; the utility study one per scheme,
 * optionally suffixed (e.g. "proposed/n_faps=10").
 */
MetricsReport run_experiment(const SimConfig& config, const Sweep& sweep, Study study,
                             std::string_view variant_suffix = {});

} // namespace fran

#endif // FRAN_SIM_ENGINE_HPP
