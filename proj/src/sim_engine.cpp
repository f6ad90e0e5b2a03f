#include <fran/errors.hpp>
#include <fran/random.hpp>
#include <fran/sim_engine.hpp>
#include <fran/text.hpp>

#include <cmath>
#include <queue>
#include <stdexcept>

namespace fran {

namespace {

enum Stream : std::uint64_t
{
    kSessionStream = 0,
    kChannelStream = 1,
    kTopologyStream = 2,
};

struct Later
{
    bool operator()(const Event& a, const Event& b) const noexcept
    {
        return a.time != b.time ? a.time > b.time : a.sequence > b.sequence;
    }
};

class EventQueue
{
public:
    void push(double time, EventKind kind, std::uint64_t subject)
    {
        queue_.push(Event{time, next_++, kind, subject});
    }
    bool empty() const noexcept { return queue_.empty(); }
    Event pop()
    {
        Event e = queue_.top();
        queue_.pop();
        return e;
    }

private:
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t next_ = 0;
};

struct Session
{
    double arrival = 0.0;
    double end = 0.0;
    bool fast = false;
    std::size_t handovers = 0;
};

EntityKind source_of(HandoverKind kind)
{
    switch (kind) {
    case HandoverKind::fap_to_fap:
    case HandoverKind::fap_to_mrrh:
        return EntityKind::fap;
    case HandoverKind::srrh_to_srrh:
    case HandoverKind::srrh_to_mrrh:
        return EntityKind::srrh;
    case HandoverKind::mrrh_to_fap:
        return EntityKind::mrrh;
    }
    return EntityKind::fap;
}

EntityKind target_of(HandoverKind kind)
{
    switch (kind) {
    case HandoverKind::fap_to_fap:
    case HandoverKind::mrrh_to_fap:
        return EntityKind::fap;
    case HandoverKind::srrh_to_srrh:
        return EntityKind::srrh;
    case HandoverKind::fap_to_mrrh:
    case HandoverKind::srrh_to_mrrh:
        return EntityKind::mrrh;
    }
    return EntityKind::fap;
}

void run_games(const SimConfig& config, std::uint64_t seed, const Topology& topology, std::size_t snapshot,
               ReplicationRecord& rec)
{
    Rng rng(derive_seed(seed, {kChannelStream, snapshot}));
    const auto channel = draw_channel(topology, config.channel, rng);
    for (auto scheme : kAllSchemes) {
        const auto result =
            run_baseline(scheme, topology, channel, config.channel, config.utility, config.grid, config.game);
        rec.utility[static_cast<std::size_t>(scheme)] += result.total_net_utility;
        rec.game_rows.push_back(game_csv_row(result, scheme, config.topology.n_faps, config.topology.n_fues_per_fap,
                                             seed));
        if (scheme == Scheme::non_fran) {
            continue;
        }
        ++rec.games;
        rec.monotone_violations += result.monotone_violations;
        if (!result.converged) {
            continue;
        }
        ++rec.games_converged;
        // One certificate per replication keeps the full check affordable at fig6 scale.
        if (snapshot == 0) {
            UtilityParams played = config.utility;
            if (scheme == Scheme::existing_fran) {
                played.reward_coefficient = 0.0;
            }
            ++rec.ne_checks;
            if (!verify_ne(result.allocation, channel, played, config.channel, topology, config.game.epsilon)) {
                ++rec.ne_failures;
            }
        }
    }
}

bool has_players(const Topology& topology)
{
    for (const auto& u : topology.fues) {
        if (!is_mrrh(u.serving_node)) {
            return true;
        }
    }
    return false;
}

} // namespace

SimConfig SimConfig::defaults()
{
    SimConfig c;
    c.session.residence_rate = fluid_flow_residence_rate(c.mean_speed(), c.topology.fap_radius);
    return c;
}

double SimConfig::mean_speed() const noexcept
{
    return (1.0 - topology.p_high_speed) * topology.speed_low + topology.p_high_speed * topology.speed_high;
}

double SimConfig::slow_fraction() const noexcept
{
    double p = 0.0;
    if (topology.speed_low <= speed_threshold) {
        p += 1.0 - topology.p_high_speed;
    }
    if (topology.speed_high <= speed_threshold) {
        p += topology.p_high_speed;
    }
    return p;
}

void SimConfig::validate() const
{
    if (!(horizon > 0.0) || std::isinf(horizon)) {
        throw ConfigError("sim.horizon: must be > 0 and finite");
    }
    if (replications < 1) {
        throw ConfigError("sim.replications: must be >= 1");
    }
    if (!(speed_threshold > 0.0)) {
        throw ConfigError("handover.speed_threshold: must be > 0");
    }
    session.validate();
    topology.validate();
    channel.validate();
    utility.validate();
    game.validate();
    overhead.validate();
    if (static_cast<double>(channel.n_subchannels) * grid.min() > grid.max() * (1.0 + 1e-12)) {
        throw ConfigError("power.p_min: n_subchannels * p_min exceeds the p_max budget");
    }
    if (snapshots > 0 && topology.n_fues_per_fap > channel.n_subchannels) {
        throw ConfigError("topology.n_fues_per_fap: exceeds channel.n_subchannels");
    }
    double total = 0.0;
    for (const auto& [kind, p] : mix) {
        if (p < 0.0) {
            throw ConfigError("handover.mix_" + std::string(to_string(kind)) + ": must be >= 0");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("handover.mix_*: probabilities must sum to 1");
    }
}

HandoverCosts trace_costs(Procedure procedure, const OverheadProfile& profile)
{
    HandoverCosts out;
    for (auto kind : kAllHandoverKinds) {
        out[kind] = trace_overhead(build_trace(kind, procedure), profile).total();
    }
    return out;
}

double analytic_overhead_rate(const SimConfig& config)
{
    auto costs = trace_costs(config.procedure, config.overhead);
    if (config.procedure == Procedure::fran) {
        // Refused MRRH -> small-cell crossings cost nothing.
        costs[HandoverKind::mrrh_to_fap] *= config.slow_fraction();
    }
    return expected_overhead_rate(config.session, costs, config.mix);
}

ReplicationRecord run_replication(const SimConfig& config, std::uint64_t seed)
{
    ReplicationRecord rec;
    rec.seed = seed;

    std::array<OverheadBreakdown, kAllHandoverKinds.size()> breakdown{};
    for (auto kind : kAllHandoverKinds) {
        breakdown[static_cast<std::size_t>(kind)] = trace_overhead(build_trace(kind, config.procedure), config.overhead);
    }

    std::vector<HandoverKind> kinds;
    std::vector<double> weights;
    for (const auto& [kind, p] : config.mix) {
        kinds.push_back(kind);
        weights.push_back(p);
    }
    std::discrete_distribution<std::size_t> pick_kind(weights.begin(), weights.end());

    Rng rng(derive_seed(seed, {kSessionStream}));
    std::exponential_distribution<double> interarrival(config.session.arrival_rate > 0.0 ? config.session.arrival_rate
                                                                                          : 1.0);
    std::exponential_distribution<double> holding(config.session.holding_rate());
    const double eta = config.session.residence_rate;
    std::exponential_distribution<double> residence(eta > 0.0 ? eta : 1.0);
    std::bernoulli_distribution fast(config.topology.p_high_speed);

    EventQueue queue;
    std::vector<Session> sessions;
    if (config.session.arrival_rate > 0.0) {
        const double first = interarrival(rng);
        if (first < config.horizon) {
            queue.push(first, EventKind::session_arrival, 0);
        }
    }
    for (std::size_t i = 0; i < config.snapshots; ++i) {
        const double t = config.horizon * (static_cast<double>(i) + 0.5) / static_cast<double>(config.snapshots);
        queue.push(t, EventKind::snapshot, i);
    }

    Topology topology;
    bool games = false;
    if (config.snapshots > 0) {
        Rng topo_rng(derive_seed(seed, {kTopologyStream}));
        topology = generate_topology(config.topology, topo_rng);
        games = has_players(topology);
    }

    double now = 0.0;
    double last_arrival = 0.0;
    double gap_sum = 0.0;
    while (!queue.empty()) {
        const Event ev = queue.pop();
        if (ev.time < now) {
            rec.causal = false;
        }
        now = ev.time;
        ++rec.events;

        switch (ev.kind) {
        case EventKind::session_arrival: {
            gap_sum += ev.time - last_arrival;
            last_arrival = ev.time;
            Session s;
            s.arrival = ev.time;
            s.end = ev.time + holding(rng);
            s.fast = fast(rng);
            const auto id = sessions.size();
            sessions.push_back(s);
            ++rec.sessions;
            queue.push(s.end, EventKind::session_end, id);
            if (eta > 0.0) {
                const double t = ev.time + residence(rng);
                if (t < s.end) {
                    queue.push(t, EventKind::boundary_crossing, id);
                }
            }
            const double next = ev.time + interarrival(rng);
            if (next < config.horizon) {
                queue.push(next, EventKind::session_arrival, id + 1);
            }
            break;
        }
        case EventKind::session_end:
            if (ev.time < sessions[ev.subject].arrival) {
                rec.causal = false;
            }
            break;
        case EventKind::boundary_crossing: {
            auto& s = sessions[ev.subject];
            ++rec.crossings;
            const auto kind = kinds[pick_kind(rng)];
            const double speed = s.fast ? config.topology.speed_high : config.topology.speed_low;
            if (speed_gate(speed, config.speed_threshold, source_of(kind), target_of(kind), config.procedure)) {
                const auto k = static_cast<std::size_t>(kind);
                ++rec.handovers;
                ++rec.handovers_by_kind[k];
                // Scenario 2: the session began in the cell it is now leaving.
                if (s.handovers == 0) {
                    ++rec.scenario2;
                } else {
                    ++rec.scenario1;
                }
                ++s.handovers;
                rec.processing_overhead += breakdown[k].processing;
                rec.transmitting_overhead += breakdown[k].transmitting;
                rec.overhead_by_kind[k] += breakdown[k].total();
                if (kind == HandoverKind::mrrh_to_fap && speed > config.speed_threshold) {
                    ++rec.fast_mrrh_to_fap;
                }
            } else {
                ++rec.gated;
            }
            const double t = ev.time + residence(rng);
            if (t < s.end) {
                queue.push(t, EventKind::boundary_crossing, ev.subject);
            }
            break;
        }
        case EventKind::snapshot:
            if (games) {
                run_games(config, seed, topology, ev.subject, rec);
            }
            break;
        }
    }

    rec.overhead_rate = rec.overhead() / config.horizon;
    rec.mean_interarrival = rec.sessions == 0 ? 0.0 : gap_sum / static_cast<double>(rec.sessions);
    if (games && config.snapshots > 0) {
        for (auto& u : rec.utility) {
            u /= static_cast<double>(config.snapshots);
        }
    }
    return rec;
}

std::string_view to_string(SweepParam param) noexcept
{
    switch (param) {
    case SweepParam::arrival_rate:
        return "arrival_rate";
    case SweepParam::mean_holding_time:
        return "mean_holding_time";
    case SweepParam::n_fues_per_fap:
        return "n_fues_per_fap";
    case SweepParam::n_faps:
        return "n_faps";
    }
    return "?";
}

SweepParam parse_sweep_param(std::string_view name)
{
    for (auto p : {SweepParam::arrival_rate, SweepParam::mean_holding_time, SweepParam::n_fues_per_fap,
                   SweepParam::n_faps}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw ConfigError("unknown sweep parameter '" + std::string(name) +
                      "' (expected arrival_rate, mean_holding_time, n_fues_per_fap or n_faps)");
}

const MetricRow& MetricsReport::find(double sweep_value, std::string_view variant, std::string_view metric) const
{
    for (const auto& r : rows) {
        if (r.sweep_value == sweep_value && r.variant == variant && r.metric == metric) {
            return r;
        }
    }
    throw std::out_of_range("no metric row for " + std::string(variant) + "/" + std::string(metric) + " at " +
                            format_number(sweep_value));
}

Aggregate aggregate(const std::vector<double>& samples)
{
    Aggregate a;
    a.n = samples.size();
    if (a.n == 0) {
        a.mean = std::nan("");
        a.std_err = std::nan("");
        return a;
    }
    double sum = 0.0;
    for (double x : samples) {
        sum += x;
    }
    a.mean = sum / static_cast<double>(a.n);
    if (a.n < 2) {
        a.std_err = std::nan("");
        return a;
    }
    double ss = 0.0;
    for (double x : samples) {
        ss += (x - a.mean) * (x - a.mean);
    }
    a.std_err = std::sqrt(ss / static_cast<double>(a.n - 1) / static_cast<double>(a.n));
    return a;
}

SimConfig apply_sweep_value(SimConfig config, SweepParam param, double value)
{
    auto as_count = [&](std::string_view key) {
        if (!(value >= 0.0) || value != std::floor(value)) {
            throw ConfigError(std::string(key) + ": sweep value must be a nonnegative integer");
        }
        return static_cast<std::size_t>(value);
    };
    switch (param) {
    case SweepParam::arrival_rate:
        config.session.arrival_rate = value;
        break;
    case SweepParam::mean_holding_time:
        config.session.mean_holding_time = value;
        break;
    case SweepParam::n_fues_per_fap:
        config.topology.n_fues_per_fap = as_count("n_fues_per_fap");
        break;
    case SweepParam::n_faps:
        config.topology.n_faps = as_count("n_faps");
        break;
    }
    return config;
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t point, std::size_t rep) noexcept
{
    return derive_seed(base, {point, rep});
}

MetricsReport run_experiment(const SimConfig& config, const Sweep& sweep, Study study, std::string_view variant_suffix)
{
    MetricsReport report;
    const std::string param(to_string(sweep.param));
    auto add_rows = [&](double value, const std::string& variant, const std::string& metric,
                        const std::vector<double>& samples) {
        const auto a = aggregate(samples);
        report.rows.push_back(MetricRow{param, value, variant, metric, a.mean, a.std_err, a.n});
    };

    for (std::size_t point = 0; point < sweep.values.size(); ++point) {
        const double value = sweep.values[point];
        SimConfig base = apply_sweep_value(config, sweep.param, value);

        if (study == Study::overhead) {
            base.snapshots = 0;
            base.validate();
            for (auto procedure : {Procedure::fran, Procedure::non_fran}) {
                SimConfig c = base;
                c.procedure = procedure;
                PointRecords pr{value, std::string(to_string(procedure)) + std::string(variant_suffix), {}};
                for (std::size_t rep = 0; rep < c.replications; ++rep) {
                    pr.replications.push_back(run_replication(c, replication_seed(c.seed, point, rep)));
                }
                auto collect = [&](auto&& f) {
                    std::vector<double> v;
                    for (const auto& r : pr.replications) {
                        v.push_back(f(r));
                    }
                    return v;
                };
                add_rows(value, pr.variant, "overhead_rate", collect([](const auto& r) { return r.overhead_rate; }));
                for (const auto& [kind, p] : c.mix) {
                    if (p <= 0.0) {
                        continue;
                    }
                    add_rows(value, pr.variant, "overhead_rate." + std::string(to_string(kind)),
                             collect([&, k = kind](const auto& r) { return r.overhead_rate_of(k, c.horizon); }));
                }
                add_rows(value, pr.variant, "handovers_per_session",
                         collect([](const auto& r) { return r.handovers_per_session(); }));
                report.records.push_back(std::move(pr));
            }
        } else {
            if (base.snapshots == 0) {
                throw ConfigError("sim.snapshots: the utility study needs at least one snapshot");
            }
            base.validate();
            std::vector<ReplicationRecord> reps;
            for (std::size_t rep = 0; rep < base.replications; ++rep) {
                reps.push_back(run_replication(base, replication_seed(base.seed, point, rep)));
            }
            for (auto scheme : kAllSchemes) {
                const std::string variant = std::string(to_string(scheme)) + std::string(variant_suffix);
                std::vector<double> v;
                for (const auto& r : reps) {
                    v.push_back(r.utility[static_cast<std::size_t>(scheme)]);
                }
                add_rows(value, variant, "total_net_utility", v);
            }
            report.records.push_back(PointRecords{value, "games" + std::string(variant_suffix), std::move(reps)});
        }
    }
    return report;
}

} // namespace fran
