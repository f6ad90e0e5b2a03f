#include <fran/errors.hpp>
#include <fran/handover.hpp>
#include <fran/random.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace fran;

namespace {

OverheadProfile uniform_profile(double value)
{
    auto p = OverheadProfile::empty();
    for (auto k : kAllEntityKinds) {
        p.set_processing(k, value);
    }
    for (auto l : kAllLinkKinds) {
        p.set_link(l, value);
    }
    return p;
}

bool touches(const SignalingTrace& t, EntityKind kind)
{
    for (const auto& m : t.messages) {
        for (const auto& e : m.path()) {
            if (e.kind == kind) {
                return true;
            }
        }
    }
    return false;
}

} // namespace

TEST_CASE("every canonical trace is well formed")
{
    for (auto kind : kAllHandoverKinds) {
        for (auto proc : {Procedure::fran, Procedure::non_fran}) {
            const auto t = build_trace(kind, proc);
            CAPTURE(to_string(kind));
            CAPTURE(to_string(proc));
            CHECK(t.handover_kind == kind);
            CHECK(t.procedure == proc);
            REQUIRE_FALSE(t.messages.empty());
            CHECK(t.messages.front().from.kind == EntityKind::fue);
            CHECK_NOTHROW(t.validate());
            for (const auto& m : t.messages) {
                const auto path = m.path();
                for (std::size_t i = 1; i < path.size(); ++i) {
                    CHECK(link_between(path[i - 1].kind, path[i].kind).has_value());
                }
            }
        }
    }
}

TEST_CASE("validate rejects hops outside the link set")
{
    SignalingTrace t;
    t.messages.push_back({"MeasurementReport", {EntityKind::fue}, {EntityKind::mme_core}, {}});
    CHECK_THROWS_AS(t.validate(), ContractViolation);
    SignalingTrace wrong_start;
    wrong_start.messages.push_back({"Request", {EntityKind::fap}, {EntityKind::fap_gateway}, {}});
    CHECK_THROWS_AS(wrong_start.validate(), ContractViolation);
    SignalingTrace empty;
    CHECK_THROWS_AS(empty.validate(), ContractViolation);
}

TEST_CASE("FRAN F-AP to MRRH decides at the edge")
{
    const auto t = build_trace(HandoverKind::fap_to_mrrh, Procedure::fran);
    bool reached_request = false;
    for (const auto& m : t.messages) {
        if (m.name == "HandoverRequest") {
            reached_request = true;
            break;
        }
        for (const auto& e : m.path()) {
            const bool edge = e.kind == EntityKind::fue || e.kind == EntityKind::fap ||
                              e.kind == EntityKind::fap_gateway;
            CHECK(edge);
        }
    }
    CHECK(reached_request);
    CHECK_FALSE(touches(t, EntityKind::mme_core));
}

TEST_CASE("FRAN F-AP to F-AP never reaches the core")
{
    CHECK_FALSE(touches(build_trace(HandoverKind::fap_to_fap, Procedure::fran), EntityKind::mme_core));
    CHECK_FALSE(touches(build_trace(HandoverKind::fap_to_fap, Procedure::fran), EntityKind::bbu_pool));
    CHECK(touches(build_trace(HandoverKind::fap_to_fap, Procedure::non_fran), EntityKind::mme_core));
}

TEST_CASE("non-FRAN traffic dominates FRAN traffic entry by entry")
{
    for (auto kind : kAllHandoverKinds) {
        const auto f = count_trace(build_trace(kind, Procedure::fran));
        const auto n = count_trace(build_trace(kind, Procedure::non_fran));
        CAPTURE(to_string(kind));
        for (std::size_t i = 0; i < kEntityKindCount; ++i) {
            CHECK(f.processing[i] <= n.processing[i]);
        }
        for (std::size_t i = 0; i < kLinkKindCount; ++i) {
            CHECK(f.links[i] <= n.links[i]);
        }
        CHECK(f.processing[static_cast<std::size_t>(EntityKind::mme_core)] == 0);
        CHECK(n.processing[static_cast<std::size_t>(EntityKind::mme_core)] > 0);
    }
    const auto f = count_trace(build_trace(HandoverKind::fap_to_fap, Procedure::fran));
    const auto n = count_trace(build_trace(HandoverKind::fap_to_fap, Procedure::non_fran));
    const auto gc = static_cast<std::size_t>(LinkKind::gateway_core);
    CHECK(n.links[gc] > f.links[gc]);
}

TEST_CASE("MRRH to F-AP under FRAN is the most complex procedure")
{
    const auto hard = build_trace(HandoverKind::mrrh_to_fap, Procedure::fran);
    CHECK(hard.highest_complexity);
    for (auto kind : {HandoverKind::fap_to_fap, HandoverKind::fap_to_mrrh}) {
        const auto other = build_trace(kind, Procedure::fran);
        CHECK_FALSE(other.highest_complexity);
        CHECK(hard.messages.size() > other.messages.size());
    }
    CHECK_FALSE(build_trace(HandoverKind::mrrh_to_fap, Procedure::non_fran).highest_complexity);
}

TEST_CASE("SRRH variants reuse the F-AP tables")
{
    const auto f = build_trace(HandoverKind::fap_to_fap, Procedure::fran);
    const auto s = build_trace(HandoverKind::srrh_to_srrh, Procedure::fran);
    REQUIRE(f.messages.size() == s.messages.size());
    CHECK(touches(s, EntityKind::srrh));
    CHECK_FALSE(touches(s, EntityKind::fap));
    const auto p = OverheadProfile::defaults();
    CHECK(trace_overhead(f, p).total() == trace_overhead(s, p).total());
}

TEST_CASE("trace_overhead examples")
{
    CHECK(trace_overhead(build_trace(HandoverKind::fap_to_mrrh, Procedure::fran), uniform_profile(0.0)).total() ==
          0.0);

    SignalingTrace one;
    one.messages.push_back({"MeasurementReport", {EntityKind::fue}, {EntityKind::fap}, {}});
    auto p = uniform_profile(0.0);
    p.set_processing(EntityKind::fue, 1.0);
    p.set_processing(EntityKind::fap, 2.0);
    p.set_link(LinkKind::radio, 3.0);
    const auto b = trace_overhead(one, p);
    CHECK(b.processing == 3.0);
    CHECK(b.transmitting == 3.0);
    CHECK(b.total() == 6.0);
}

TEST_CASE("FRAN F-AP to MRRH cost under the default profile")
{
    // message                     processing  links
    // MeasurementReport  U-F      1+1         1
    // HandoverDecision   F-G      1+2         2
    // HandoverDecisionAck G-F     2+1         2
    // HandoverRequest    F-G-B-M  1+2+4+2     2+4+4
    // AdmissionControl   M        2           -
    // HandoverRequestAck M-B-G-F  2+4+2+1     4+4+2
    // HandoverCommand    F-U      1+1         1
    // DataForwarding     F-G-B-M  1+2+4+2     2+4+4
    // HandoverConfirm    U-M      1+2         1
    // PathSwitch         G        2           -
    // UeContextRelease   G-F      2+1         2
    const double processing = 2 + 3 + 3 + 9 + 2 + 9 + 2 + 9 + 3 + 2 + 3;
    const double links = 1 + 2 + 2 + 10 + 0 + 10 + 1 + 10 + 1 + 0 + 2;
    const auto b = trace_overhead(build_trace(HandoverKind::fap_to_mrrh, Procedure::fran),
                                  OverheadProfile::defaults());
    CHECK(b.processing == processing);
    CHECK(b.transmitting == links);
    CHECK(b.total() == 86.0);
}

TEST_CASE("processing plus transmitting equals the total")
{
    Rng rng(4);
    std::uniform_real_distribution<double> cost(0.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = OverheadProfile::empty();
        for (auto k : kAllEntityKinds) {
            p.set_processing(k, cost(rng));
        }
        for (auto l : kAllLinkKinds) {
            p.set_link(l, cost(rng));
        }
        for (auto kind : kAllHandoverKinds) {
            for (auto proc : {Procedure::fran, Procedure::non_fran}) {
                const auto t = build_trace(kind, proc);
                const auto b = trace_overhead(t, p);
                double by_hand = 0.0;
                for (const auto& m : t.messages) {
                    const auto path = m.path();
                    for (std::size_t i = 0; i < path.size(); ++i) {
                        by_hand += p.processing(path[i].kind);
                        if (i > 0) {
                            by_hand += p.link(*link_between(path[i - 1].kind, path[i].kind));
                        }
                    }
                }
                CHECK(b.processing + b.transmitting == b.total());
                CHECK(b.total() == doctest::Approx(by_hand).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("FRAN is cheaper for every ordered profile")
{
    Rng rng(99);
    std::uniform_real_distribution<double> cost(0.0, 10.0);
    std::uniform_real_distribution<double> gap(1e-3, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        auto p = OverheadProfile::empty();
        for (auto k : kAllEntityKinds) {
            p.set_processing(k, cost(rng));
        }
        for (auto l : kAllLinkKinds) {
            p.set_link(l, trial % 4 == 0 ? 0.0 : cost(rng));
        }
        p.set_processing(EntityKind::mme_core,
                         std::max(p.processing(EntityKind::fue), p.processing(EntityKind::fap)) + gap(rng));
        REQUIRE_NOTHROW(p.validate());
        for (auto kind : kAllHandoverKinds) {
            CHECK(trace_overhead(build_trace(kind, Procedure::fran), p).total() <
                  trace_overhead(build_trace(kind, Procedure::non_fran), p).total());
        }
    }
}

TEST_CASE("overhead profile errors")
{
    const auto empty = OverheadProfile::empty();
    try {
        (void)trace_overhead(build_trace(HandoverKind::fap_to_fap, Procedure::fran), empty);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fue") != std::string::npos);
    }
    auto p = OverheadProfile::defaults();
    p.set_processing(EntityKind::fap, 8.0);
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = OverheadProfile::defaults();
    p.set_link(LinkKind::radio, -1.0);
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_NOTHROW(OverheadProfile::defaults().validate());
}

TEST_CASE("write_trace emits one line per message")
{
    const auto t = build_trace(HandoverKind::fap_to_mrrh, Procedure::fran);
    std::ostringstream out;
    write_trace(out, t);
    std::istringstream in(out.str());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind(t.messages[n].name + "\t", 0) == 0);
        ++n;
    }
    CHECK(n == t.messages.size());
}

TEST_CASE("names round-trip")
{
    for (auto k : kAllEntityKinds) {
        CHECK(parse_entity_kind(to_string(k)) == k);
    }
    for (auto l : kAllLinkKinds) {
        CHECK(parse_link_kind(to_string(l)) == l);
    }
    for (auto h : kAllHandoverKinds) {
        CHECK(parse_handover_kind(to_string(h)) == h);
    }
    CHECK(parse_procedure("non_fran") == Procedure::non_fran);
    CHECK_THROWS_AS(parse_procedure("lte"), ConfigError);
    CHECK_THROWS_AS(parse_entity_kind("sgw"), ConfigError);
}

TEST_CASE("scenario_probabilities examples")
{
    SessionModel s;
    s.mean_holding_time = 1.0;
    s.residence_rate = 0.0;
    auto p = scenario_probabilities(s);
    CHECK(p.p_s2 == 0.0);
    CHECK(p.expected_handovers_per_session == 0.0);

    s.residence_rate = 1.0;
    CHECK(scenario_probabilities(s).p_s2 == 0.5);

    s.residence_rate = 0.2;
    p = scenario_probabilities(s);
    CHECK(p.expected_handovers_per_session == doctest::Approx(0.2));
    CHECK(p.p_s2 == doctest::Approx(0.2 / 1.2));
    CHECK(p.s1_expected == doctest::Approx(0.2 - 0.2 / 1.2));

    for (double eta : {0.0, 0.01, 0.5, 3.0, 100.0}) {
        for (double hold : {0.1, 1.0, 50.0}) {
            s.residence_rate = eta;
            s.mean_holding_time = hold;
            p = scenario_probabilities(s);
            CHECK(p.p_s2 >= 0.0);
            CHECK(p.p_s2 < 1.0);
            CHECK(p.expected_handovers_per_session >= p.p_s2);
        }
    }
}

TEST_CASE("expected handovers per session against a Monte Carlo session oracle")
{
    // eta = 0.2, mu = 1: count exponential(eta) crossings inside an exponential(mu) holding time.
    std::mt19937_64 rng(2024);
    std::exponential_distribution<double> hold(1.0);
    std::exponential_distribution<double> residence(0.2);
    const std::size_t n = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double end = hold(rng);
        double t = residence(rng);
        double count = 0.0;
        while (t < end) {
            count += 1.0;
            t += residence(rng);
        }
        sum += count;
        sum2 += count * count;
    }
    const double mean = sum / static_cast<double>(n);
    const double se = std::sqrt((sum2 / static_cast<double>(n) - mean * mean) / static_cast<double>(n - 1));
    SessionModel s;
    s.mean_holding_time = 1.0;
    s.residence_rate = 0.2;
    CHECK(std::abs(mean - scenario_probabilities(s).expected_handovers_per_session) < 3.0 * se);
}

TEST_CASE("expected_overhead_rate examples")
{
    SessionModel s;
    s.arrival_rate = 0.0;
    s.mean_holding_time = 5.0;
    s.residence_rate = 0.1;
    const HandoverCosts costs = {{HandoverKind::fap_to_fap, 40.0}, {HandoverKind::fap_to_mrrh, 86.0}};
    const HandoverMix mix = {{HandoverKind::fap_to_fap, 0.25}, {HandoverKind::fap_to_mrrh, 0.75}};
    CHECK(expected_overhead_rate(s, costs, mix) == 0.0);

    s.arrival_rate = 0.1;
    const double one = expected_overhead_rate(s, costs, mix);
    CHECK(one == doctest::Approx(0.1 * 0.5 * (0.25 * 40.0 + 0.75 * 86.0)));
    s.arrival_rate = 0.2;
    CHECK(expected_overhead_rate(s, costs, mix) == 2.0 * one);

    s.arrival_rate = 0.1;
    double prev = 0.0;
    for (double hold = 1.0; hold <= 10.0; hold += 1.0) {
        s.mean_holding_time = hold;
        const double r = expected_overhead_rate(s, costs, mix);
        CHECK(r > prev);
        prev = r;
    }

    const HandoverMix bad = {{HandoverKind::fap_to_fap, 0.5}, {HandoverKind::fap_to_mrrh, 0.4}};
    CHECK_THROWS_AS(expected_overhead_rate(s, costs, bad), ConfigError);
}

TEST_CASE("fluid-flow residence rate")
{
    CHECK(fluid_flow_residence_rate(6.7, 50.0) == doctest::Approx(2.0 * 6.7 / (std::numbers::pi * 50.0)));
    CHECK(fluid_flow_residence_rate(0.0, 50.0) == 0.0);
    CHECK_THROWS_AS(fluid_flow_residence_rate(1.0, 0.0), ConfigError);
}

TEST_CASE("speed_gate examples")
{
    CHECK_FALSE(speed_gate(30.0, 10.0, EntityKind::mrrh, EntityKind::fap, Procedure::fran));
    CHECK_FALSE(speed_gate(30.0, 10.0, EntityKind::mrrh, EntityKind::srrh, Procedure::fran));
    CHECK(speed_gate(30.0, 10.0, EntityKind::mrrh, EntityKind::fap, Procedure::non_fran));
    CHECK(speed_gate(30.0, 10.0, EntityKind::fap, EntityKind::mrrh, Procedure::fran));
    CHECK(speed_gate(5.0, 10.0, EntityKind::mrrh, EntityKind::fap, Procedure::fran));
    CHECK(speed_gate(10.0, 10.0, EntityKind::mrrh, EntityKind::fap, Procedure::fran));
    CHECK(speed_gate(30.0, 10.0, EntityKind::fap, EntityKind::fap, Procedure::fran));
}
