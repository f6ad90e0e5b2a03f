#include <fran/errors.hpp>
#include <fran/handover.hpp>

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <ostream>

namespace fran {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const std::array<Enum, N>& all, std::string_view what)
{
    for (auto e : all) {
        if (to_string(e) == name) {
            return e;
        }
    }
    throw ConfigError("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

// Trace tables. Each row is a message name and its path from origin to
// destination; a one-entry path is a locally processed step.
struct Row
{
    const char* name;
    std::initializer_list<Endpoint> path;
};

constexpr Endpoint U{EntityKind::fue};
constexpr Endpoint Fs{EntityKind::fap, Side::source};
constexpr Endpoint Ft{EntityKind::fap, Side::target};
constexpr Endpoint Ms{EntityKind::mrrh, Side::source};
constexpr Endpoint Mt{EntityKind::mrrh, Side::target};
constexpr Endpoint G{EntityKind::fap_gateway};
constexpr Endpoint B{EntityKind::bbu_pool};
constexpr Endpoint C{EntityKind::mme_core};

// Decision with the gateway, request/ack over the gateway (S1), no core hop.
const std::initializer_list<Row> kFranFapToFap = {
    {"MeasurementReport", {U, Fs}},
    {"HandoverDecision", {Fs, G}},
    {"HandoverDecisionAck", {G, Fs}},
    {"HandoverRequest", {Fs, G, Ft}},
    {"AdmissionControl", {Ft}},
    {"HandoverRequestAck", {Ft, G, Fs}},
    {"HandoverCommand", {Fs, U}},
    {"DataForwarding", {Fs, G, Ft}},
    {"HandoverConfirm", {U, Ft}},
    {"PathSwitch", {G}},
    {"UeContextRelease", {G, Fs}},
};

const std::initializer_list<Row> kNonFranFapToFap = {
    {"MeasurementReport", {U, Fs}},
    {"HandoverDecision", {Fs, G, C}},
    {"HandoverDecisionAck", {C, G, Fs}},
    {"HandoverRequest", {Fs, G, C, G, Ft}},
    {"AdmissionControl", {Ft, G, C}},
    {"HandoverRequestAck", {Ft, G, C, G, Fs}},
    {"HandoverCommand", {Fs, U}},
    {"DataForwarding", {Fs, G, C, G, Ft}},
    {"HandoverConfirm", {U, Ft}},
    {"PathSwitchRequest", {Ft, G, C}},
    {"PathSwitchAck", {C, G, Ft}},
    {"UeContextRelease", {C, G, Fs}},
};

const std::initializer_list<Row> kFranFapToMrrh = {
    {"MeasurementReport", {U, Fs}},
    {"HandoverDecision", {Fs, G}},
    {"HandoverDecisionAck", {G, Fs}},
    {"HandoverRequest", {Fs, G, B, Mt}},
    {"AdmissionControl", {Mt}},
    {"HandoverRequestAck", {Mt, B, G, Fs}},
    {"HandoverCommand", {Fs, U}},
    {"DataForwarding", {Fs, G, B, Mt}},
    {"HandoverConfirm", {U, Mt}},
    {"PathSwitch", {G}},
    {"UeContextRelease", {G, Fs}},
};

const std::initializer_list<Row> kNonFranFapToMrrh = {
    {"MeasurementReport", {U, Fs}},
    {"HandoverDecision", {Fs, G, C}},
    {"HandoverDecisionAck", {C, G, Fs}},
    {"HandoverRequest", {Fs, G, B, C, B, Mt}},
    {"AdmissionControl", {Mt, B, C}},
    {"HandoverRequestAck", {Mt, B, C, B, G, Fs}},
    {"HandoverCommand", {Fs, U}},
    {"DataForwarding", {Fs, G, B, C, B, Mt}},
    {"HandoverConfirm", {U, Mt}},
    {"PathSwitchRequest", {Mt, B, C}},
    {"PathSwitch", {C, G}},
    {"PathSwitchAck", {C, B, Mt}},
    {"UeContextRelease", {C, G, Fs}},
};

// No direct MRRH/F-AP signaling: the measurement travels up to the gateway,
// which has to query the candidate target before deciding.
const std::initializer_list<Row> kFranMrrhToFap = {
    {"MeasurementReport", {U, Ms}},
    {"MeasurementForward", {Ms, B, G}},
    {"CandidateQuery", {G, Ft}},
    {"CandidateReport", {Ft, G}},
    {"HandoverDecision", {G}},
    {"HandoverRequest", {G, Ft}},
    {"AdmissionControl", {Ft}},
    {"HandoverRequestAck", {Ft, G}},
    {"HandoverCommandForward", {G, B, Ms}},
    {"HandoverCommand", {Ms, U}},
    {"DataForwarding", {Ms, B, G, Ft}},
    {"HandoverConfirm", {U, Ft}},
    {"PathSwitch", {G}},
    {"UeContextRelease", {G, B, Ms}},
};

const std::initializer_list<Row> kNonFranMrrhToFap = {
    {"MeasurementReport", {U, Ms}},
    {"MeasurementForward", {Ms, B, G, C}},
    {"CandidateQuery", {C, G, Ft}},
    {"CandidateReport", {Ft, G, C}},
    {"HandoverDecision", {G, C}},
    {"HandoverRequest", {C, G, Ft}},
    {"AdmissionControl", {Ft, G, C}},
    {"HandoverRequestAck", {Ft, G, C}},
    {"HandoverCommandForward", {C, G, B, Ms}},
    {"HandoverCommand", {Ms, U}},
    {"DataForwarding", {Ms, B, G, C, G, Ft}},
    {"HandoverConfirm", {U, Ft}},
    {"PathSwitchRequest", {Ft, G, C}},
    {"PathSwitchAck", {C, G, Ft}},
    {"UeContextRelease", {C, G, B, Ms}},
};

std::vector<Message> to_messages(const std::initializer_list<Row>& rows, bool srrh)
{
    auto map = [srrh](Endpoint e) {
        if (srrh && e.kind == EntityKind::fap) {
            e.kind = EntityKind::srrh;
        }
        return e;
    };
    std::vector<Message> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const std::vector<Endpoint> path(row.path.begin(), row.path.end());
        Message m;
        m.name = row.name;
        m.from = map(path.front());
        m.to = map(path.back());
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            m.via.push_back(map(path[i]));
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::string endpoint_label(Endpoint e)
{
    std::string label;
    if (e.side == Side::source) {
        label = "source-";
    } else if (e.side == Side::target) {
        label = "target-";
    }
    return label + std::string(to_string(e.kind));
}

bool is_small_cell(EntityKind k)
{
    return k == EntityKind::fap || k == EntityKind::srrh;
}

} // namespace

std::string_view to_string(EntityKind kind) noexcept
{
    switch (kind) {
    case EntityKind::fue:
        return "fue";
    case EntityKind::fap:
        return "fap";
    case EntityKind::srrh:
        return "srrh";
    case EntityKind::mrrh:
        return "mrrh";
    case EntityKind::fap_gateway:
        return "fap_gateway";
    case EntityKind::bbu_pool:
        return "bbu_pool";
    case EntityKind::mme_core:
        return "mme_core";
    }
    return "?";
}

std::string_view to_string(LinkKind kind) noexcept
{
    switch (kind) {
    case LinkKind::radio:
        return "radio";
    case LinkKind::fap_gateway:
        return "fap_gateway";
    case LinkKind::mrrh_bbu:
        return "mrrh_bbu";
    case LinkKind::gateway_core:
        return "gateway_core";
    case LinkKind::gateway_bbu:
        return "gateway_bbu";
    case LinkKind::bbu_core:
        return "bbu_core";
    }
    return "?";
}

std::string_view to_string(HandoverKind kind) noexcept
{
    switch (kind) {
    case HandoverKind::fap_to_fap:
        return "fap_to_fap";
    case HandoverKind::fap_to_mrrh:
        return "fap_to_mrrh";
    case HandoverKind::mrrh_to_fap:
        return "mrrh_to_fap";
    case HandoverKind::srrh_to_srrh:
        return "srrh_to_srrh";
    case HandoverKind::srrh_to_mrrh:
        return "srrh_to_mrrh";
    }
    return "?";
}

std::string_view to_string(Procedure procedure) noexcept
{
    return procedure == Procedure::fran ? "fran" : "non_fran";
}

EntityKind parse_entity_kind(std::string_view name)
{
    return parse_enum(name, kAllEntityKinds, "entity");
}

LinkKind parse_link_kind(std::string_view name)
{
    return parse_enum(name, kAllLinkKinds, "link");
}

HandoverKind parse_handover_kind(std::string_view name)
{
    return parse_enum(name, kAllHandoverKinds, "handover kind");
}

Procedure parse_procedure(std::string_view name)
{
    return parse_enum(name, std::array{Procedure::fran, Procedure::non_fran}, "procedure");
}

std::optional<LinkKind> link_between(EntityKind a, EntityKind b) noexcept
{
    auto is = [&](EntityKind x, EntityKind y) { return (a == x && b == y) || (a == y && b == x); };
    if ((a == EntityKind::fue && (is_small_cell(b) || b == EntityKind::mrrh)) ||
        (b == EntityKind::fue && (is_small_cell(a) || a == EntityKind::mrrh))) {
        return LinkKind::radio;
    }
    if ((is_small_cell(a) && b == EntityKind::fap_gateway) || (is_small_cell(b) && a == EntityKind::fap_gateway)) {
        return LinkKind::fap_gateway;
    }
    if (is(EntityKind::mrrh, EntityKind::bbu_pool)) {
        return LinkKind::mrrh_bbu;
    }
    if (is(EntityKind::fap_gateway, EntityKind::mme_core)) {
        return LinkKind::gateway_core;
    }
    if (is(EntityKind::fap_gateway, EntityKind::bbu_pool)) {
        return LinkKind::gateway_bbu;
    }
    if (is(EntityKind::bbu_pool, EntityKind::mme_core)) {
        return LinkKind::bbu_core;
    }
    return std::nullopt;
}

std::vector<Endpoint> Message::path() const
{
    std::vector<Endpoint> p;
    p.push_back(from);
    if (is_local()) {
        return p;
    }
    p.insert(p.end(), via.begin(), via.end());
    p.push_back(to);
    return p;
}

void SignalingTrace::validate() const
{
    if (messages.empty()) {
        throw ContractViolation("signaling trace is empty");
    }
    if (messages.front().from.kind != EntityKind::fue) {
        throw ContractViolation("signaling trace must open with a message from the F-UE");
    }
    for (const auto& m : messages) {
        const auto p = m.path();
        for (std::size_t i = 1; i < p.size(); ++i) {
            if (!link_between(p[i - 1].kind, p[i].kind)) {
                throw ContractViolation("message " + m.name + ": no link between " +
                                        std::string(to_string(p[i - 1].kind)) + " and " +
                                        std::string(to_string(p[i].kind)));
            }
        }
    }
}

SignalingTrace build_trace(HandoverKind kind, Procedure procedure)
{
    const bool fran = procedure == Procedure::fran;
    SignalingTrace t;
    t.handover_kind = kind;
    t.procedure = procedure;
    switch (kind) {
    case HandoverKind::fap_to_fap:
    case HandoverKind::srrh_to_srrh:
        t.messages = to_messages(fran ? kFranFapToFap : kNonFranFapToFap, kind == HandoverKind::srrh_to_srrh);
        break;
    case HandoverKind::fap_to_mrrh:
    case HandoverKind::srrh_to_mrrh:
        t.messages = to_messages(fran ? kFranFapToMrrh : kNonFranFapToMrrh, kind == HandoverKind::srrh_to_mrrh);
        break;
    case HandoverKind::mrrh_to_fap:
        t.messages = to_messages(fran ? kFranMrrhToFap : kNonFranMrrhToFap, false);
        t.highest_complexity = fran;
        break;
    }
    return t;
}

void write_trace(std::ostream& out, const SignalingTrace& trace)
{
    for (const auto& m : trace.messages) {
        out << m.name << '\t' << endpoint_label(m.from);
        if (!m.is_local()) {
            for (const auto& v : m.via) {
                out << '\t' << endpoint_label(v);
            }
            out << '\t' << endpoint_label(m.to);
        }
        out << '\n';
    }
}

OverheadProfile OverheadProfile::defaults()
{
    OverheadProfile p;
    p.set_processing(EntityKind::fue, 1);
    p.set_processing(EntityKind::fap, 1);
    p.set_processing(EntityKind::srrh, 1);
    p.set_processing(EntityKind::mrrh, 2);
    p.set_processing(EntityKind::fap_gateway, 2);
    p.set_processing(EntityKind::bbu_pool, 4);
    p.set_processing(EntityKind::mme_core, 8);
    p.set_link(LinkKind::radio, 1);
    p.set_link(LinkKind::fap_gateway, 2);
    p.set_link(LinkKind::mrrh_bbu, 4);
    p.set_link(LinkKind::gateway_core, 6);
    p.set_link(LinkKind::gateway_bbu, 4);
    p.set_link(LinkKind::bbu_core, 2);
    return p;
}

void OverheadProfile::set_processing(EntityKind kind, double cost)
{
    processing_[index(kind)] = cost;
}

void OverheadProfile::set_link(LinkKind kind, double cost)
{
    link_[index(kind)] = cost;
}

double OverheadProfile::processing(EntityKind kind) const
{
    const auto& v = processing_[index(kind)];
    if (!v) {
        throw ConfigError("overhead profile: no processing cost for entity '" + std::string(to_string(kind)) + "'");
    }
    return *v;
}

double OverheadProfile::link(LinkKind kind) const
{
    const auto& v = link_[index(kind)];
    if (!v) {
        throw ConfigError("overhead profile: no cost for link '" + std::string(to_string(kind)) + "'");
    }
    return *v;
}

void OverheadProfile::validate() const
{
    for (auto k : kAllEntityKinds) {
        if (processing(k) < 0.0) {
            throw ConfigError("overhead.processing_" + std::string(to_string(k)) + ": must be >= 0");
        }
    }
    for (auto l : kAllLinkKinds) {
        if (link(l) < 0.0) {
            throw ConfigError("overhead.link_" + std::string(to_string(l)) + ": must be >= 0");
        }
    }
    const double core = processing(EntityKind::mme_core);
    if (!(processing(EntityKind::fue) < core)) {
        throw ConfigError("overhead.processing_fue: must be below processing_mme_core");
    }
    if (!(processing(EntityKind::fap) < core)) {
        throw ConfigError("overhead.processing_fap: must be below processing_mme_core");
    }
}

TraceCounts count_trace(const SignalingTrace& trace)
{
    TraceCounts c;
    for (const auto& m : trace.messages) {
        const auto p = m.path();
        for (std::size_t i = 0; i < p.size(); ++i) {
            ++c.processing[static_cast<std::size_t>(p[i].kind)];
            if (i > 0) {
                const auto link = link_between(p[i - 1].kind, p[i].kind);
                if (!link) {
                    throw ContractViolation("message " + m.name + " crosses a pair outside the link set");
                }
                ++c.links[static_cast<std::size_t>(*link)];
            }
        }
    }
    return c;
}

OverheadBreakdown trace_overhead(const SignalingTrace& trace, const OverheadProfile& profile)
{
    const auto counts = count_trace(trace);
    OverheadBreakdown out;
    for (auto k : kAllEntityKinds) {
        if (const auto n = counts.processing[static_cast<std::size_t>(k)]; n > 0) {
            out.processing += static_cast<double>(n) * profile.processing(k);
        }
    }
    for (auto l : kAllLinkKinds) {
        if (const auto n = counts.links[static_cast<std::size_t>(l)]; n > 0) {
            out.transmitting += static_cast<double>(n) * profile.link(l);
        }
    }
    return out;
}

void SessionModel::validate() const
{
    if (!(arrival_rate >= 0.0)) {
        throw ConfigError("session.arrival_rate: must be >= 0");
    }
    if (!(mean_holding_time > 0.0) || std::isinf(mean_holding_time)) {
        throw ConfigError("session.mean_holding_time: must be > 0 and finite");
    }
    if (!(residence_rate >= 0.0)) {
        throw ConfigError("session.residence_rate: must be >= 0");
    }
}

double fluid_flow_residence_rate(double mean_speed, double cell_radius)
{
    if (!(cell_radius > 0.0) || mean_speed < 0.0) {
        throw ConfigError("fluid-flow model needs speed >= 0 and radius > 0");
    }
    const double perimeter = 2.0 * std::numbers::pi * cell_radius;
    const double area = std::numbers::pi * cell_radius * cell_radius;
    return mean_speed * perimeter / (std::numbers::pi * area);
}

ScenarioProbabilities scenario_probabilities(const SessionModel& session)
{
    const double mu = session.holding_rate();
    if (!(mu > 0.0)) {
        throw ContractViolation("scenario_probabilities: holding rate must be > 0");
    }
    const double eta = session.residence_rate;
    ScenarioProbabilities out;
    out.p_s2 = eta / (eta + mu);
    out.expected_handovers_per_session = eta / mu;
    out.s1_expected = out.expected_handovers_per_session - out.p_s2;
    return out;
}

double expected_overhead_rate(const SessionModel& session, const HandoverCosts& trace_costs, const HandoverMix& mix)
{
    double total = 0.0;
    double weighted = 0.0;
    for (const auto& [kind, p] : mix) {
        if (p < 0.0) {
            throw ConfigError("handover mix: negative probability for " + std::string(to_string(kind)));
        }
        total += p;
        if (p == 0.0) {
            continue;
        }
        const auto it = trace_costs.find(kind);
        if (it == trace_costs.end()) {
            throw ConfigError("handover mix: no trace cost for " + std::string(to_string(kind)));
        }
        weighted += p * it->second;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("handover mix: probabilities must sum to 1");
    }
    return session.arrival_rate * scenario_probabilities(session).expected_handovers_per_session * weighted;
}

bool speed_gate(double speed, double threshold, EntityKind source, EntityKind target, Procedure procedure)
{
    if (!(threshold > 0.0)) {
        throw ContractViolation("speed_gate: threshold must be > 0");
    }
    if (procedure == Procedure::non_fran) {
        return true;
    }
    return !(source == EntityKind::mrrh && is_small_cell(target) && speed > threshold);
}

} // namespace fran
