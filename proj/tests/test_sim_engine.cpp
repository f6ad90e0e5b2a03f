#include <fran/errors.hpp>
#include <fran/sim_engine.hpp>

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace fran;

namespace {

SimConfig session_only(double lambda, double hold, double eta, Procedure proc = Procedure::non_fran)
{
    SimConfig c = SimConfig::defaults();
    c.session.arrival_rate = lambda;
    c.session.mean_holding_time = hold;
    c.session.residence_rate = eta;
    c.procedure = proc;
    c.snapshots = 0;
    return c;
}

Aggregate over_reps(const SimConfig& c, std::size_t reps, double (*metric)(const ReplicationRecord&))
{
    std::vector<double> v;
    for (std::size_t r = 0; r < reps; ++r) {
        v.push_back(metric(run_replication(c, replication_seed(c.seed, 0, r))));
    }
    return aggregate(v);
}

} // namespace

TEST_CASE("defaults are consistent")
{
    const auto c = SimConfig::defaults();
    CHECK_NOTHROW(c.validate());
    CHECK(c.mean_speed() == doctest::Approx(0.7 * 1.0 + 0.3 * 20.0));
    CHECK(c.slow_fraction() == doctest::Approx(0.7));
    CHECK(c.session.residence_rate == doctest::Approx(fluid_flow_residence_rate(6.7, 50.0)));
}

TEST_CASE("no arrivals: no sessions, games still run")
{
    auto c = SimConfig::defaults();
    c.session.arrival_rate = 0.0;
    c.horizon = 100.0;
    c.snapshots = 2;
    c.topology.n_faps = 3;
    c.topology.n_fues_per_fap = 2;
    const auto r = run_replication(c, 5);
    CHECK(r.sessions == 0);
    CHECK(r.handovers == 0);
    CHECK(r.overhead() == 0.0);
    CHECK(r.games == 2 * 2); // non_fran plays no game
    CHECK(r.game_rows.size() == 2 * 3);
    CHECK(r.utility[static_cast<std::size_t>(Scheme::proposed)] != 0.0);
}

TEST_CASE("immobile users never hand over")
{
    const auto r = run_replication(session_only(0.5, 5.0, 0.0), 9);
    CHECK(r.sessions > 0);
    CHECK(r.handovers == 0);
    CHECK(r.crossings == 0);
    CHECK(r.overhead_rate == 0.0);
}

TEST_CASE("handovers per session match eta / mu")
{
    auto c = session_only(0.1, 1.0, 0.2);
    c.horizon = 1e5;
    const auto a = over_reps(c, 10, [](const ReplicationRecord& r) { return r.handovers_per_session(); });
    CHECK(std::abs(a.mean - 0.2) < 3.0 * a.std_err);
}

TEST_CASE("per-replication invariants")
{
    for (auto proc : {Procedure::fran, Procedure::non_fran}) {
        auto c = session_only(0.3, 5.0, 0.3, proc);
        c.horizon = 2e4;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto r = run_replication(c, seed);
            CHECK(r.causal);
            CHECK(r.scenario1 + r.scenario2 == r.handovers);
            CHECK(r.handovers + r.gated == r.crossings);
            CHECK(r.scenario2 <= r.sessions);
            std::size_t by_kind = 0;
            double cost = 0.0;
            for (std::size_t k = 0; k < kAllHandoverKinds.size(); ++k) {
                by_kind += r.handovers_by_kind[k];
                cost += r.overhead_by_kind[k];
            }
            CHECK(by_kind == r.handovers);
            CHECK(cost == doctest::Approx(r.overhead()).epsilon(1e-12));
            CHECK(r.overhead_rate == doctest::Approx(r.overhead() / c.horizon).epsilon(1e-12));
            if (proc == Procedure::fran) {
                CHECK(r.fast_mrrh_to_fap == 0);
            } else {
                CHECK(r.gated == 0);
            }
        }
    }
}

TEST_CASE("non-FRAN lets fast users into small cells")
{
    auto c = session_only(0.3, 5.0, 0.3, Procedure::non_fran);
    c.horizon = 2e4;
    CHECK(run_replication(c, 3).fast_mrrh_to_fap > 0);
}

TEST_CASE("replications are deterministic")
{
    auto c = SimConfig::defaults();
    c.horizon = 500.0;
    c.snapshots = 2;
    c.topology.n_faps = 3;
    const auto a = run_replication(c, 77);
    const auto b = run_replication(c, 77);
    CHECK(a.sessions == b.sessions);
    CHECK(a.handovers == b.handovers);
    CHECK(a.overhead_rate == b.overhead_rate);
    CHECK(a.utility == b.utility);
    CHECK(a.game_rows == b.game_rows);
    const auto other = run_replication(c, 78);
    CHECK(other.game_rows != a.game_rows);
}

TEST_CASE("inter-arrival times have mean 1 / lambda")
{
    auto c = session_only(1.0, 1.0, 0.0);
    c.horizon = 2e5;
    const auto r = run_replication(c, 21);
    REQUIRE(r.sessions >= 100000);
    CHECK(std::abs(r.mean_interarrival - 1.0) < 0.01);
}

TEST_CASE("simulated overhead rate agrees with the analytic rate")
{
    for (auto proc : {Procedure::fran, Procedure::non_fran}) {
        auto c = session_only(0.2, 4.0, 0.25, proc);
        c.horizon = 5e4;
        const auto a = over_reps(c, 20, [](const ReplicationRecord& r) { return r.overhead_rate; });
        CAPTURE(to_string(proc));
        CHECK(std::abs(a.mean - analytic_overhead_rate(c)) < 3.0 * a.std_err);
    }
}

TEST_CASE("analytic rate applies the gate only under FRAN")
{
    auto c = session_only(0.2, 4.0, 0.25, Procedure::fran);
    const auto costs = trace_costs(Procedure::fran, c.overhead);
    HandoverMix gated = c.mix;
    gated[HandoverKind::mrrh_to_fap] *= c.slow_fraction();
    double weighted = 0.0;
    for (const auto& [k, p] : gated) {
        weighted += p * costs.at(k);
    }
    CHECK(analytic_overhead_rate(c) == doctest::Approx(0.2 * 4.0 * 0.25 * weighted).epsilon(1e-12));
}

TEST_CASE("aggregate")
{
    const auto a = aggregate({1.0, 2.0, 3.0, 4.0});
    CHECK(a.mean == 2.5);
    CHECK(a.std_err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(a.n == 4);
    CHECK(std::isnan(aggregate({7.0}).std_err));
}

TEST_CASE("sweep plumbing")
{
    CHECK(parse_sweep_param("n_faps") == SweepParam::n_faps);
    CHECK_THROWS_AS(parse_sweep_param("bandwidth"), ConfigError);
    const auto c = apply_sweep_value(SimConfig::defaults(), SweepParam::mean_holding_time, 7.0);
    CHECK(c.session.mean_holding_time == 7.0);
    CHECK_THROWS_AS(apply_sweep_value(SimConfig::defaults(), SweepParam::n_faps, 2.5), ConfigError);

    std::set<std::uint64_t> seeds;
    for (std::size_t p = 0; p < 10; ++p) {
        for (std::size_t r = 0; r < 30; ++r) {
            seeds.insert(replication_seed(1, p, r));
        }
    }
    CHECK(seeds.size() == 300);
}

TEST_CASE("run_experiment overhead study")
{
    auto c = SimConfig::defaults();
    c.horizon = 2e3;
    c.replications = 3;
    const auto report = run_experiment(c, {SweepParam::arrival_rate, {0.1, 0.2}}, Study::overhead);
    CHECK(report.records.size() == 4);
    const auto& row = report.find(0.2, "non_fran", "overhead_rate");
    CHECK(row.n_reps == 3);
    CHECK(row.sweep_param == "arrival_rate");
    CHECK_THROWS_AS(report.find(0.3, "fran", "overhead_rate"), std::out_of_range);
    CHECK_NOTHROW(report.find(0.1, "fran", "overhead_rate.fap_to_fap"));
    CHECK_NOTHROW(report.find(0.1, "fran", "handovers_per_session"));
}

TEST_CASE("run_experiment utility study")
{
    auto c = SimConfig::defaults();
    c.horizon = 10.0;
    c.replications = 2;
    c.snapshots = 1;
    c.topology.n_faps = 2;
    const auto report = run_experiment(c, {SweepParam::n_fues_per_fap, {1, 2}}, Study::utility, "/x");
    CHECK(report.rows.size() == 6);
    CHECK_NOTHROW(report.find(2, "existing_fran/x", "total_net_utility"));
    c.snapshots = 0;
    CHECK_THROWS_AS(run_experiment(c, {SweepParam::n_fues_per_fap, {1}}, Study::utility), ConfigError);
}

TEST_CASE("config validation")
{
    auto c = SimConfig::defaults();
    c.horizon = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SimConfig::defaults();
    c.replications = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SimConfig::defaults();
    c.mix[HandoverKind::fap_to_fap] = 0.9;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SimConfig::defaults();
    c.topology.n_fues_per_fap = 9;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
