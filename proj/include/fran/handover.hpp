#ifndef FRAN_HANDOVER_HPP
#define FRAN_HANDOVER_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fran {

enum class EntityKind
{
    fue,
    fap,
    srrh,
    mrrh,
    fap_gateway,
    bbu_pool,
    mme_core,
};

inline constexpr std::size_t kEntityKindCount = 7;
inline constexpr std::array<EntityKind, kEntityKindCount> kAllEntityKinds = {
    EntityKind::fue,         EntityKind::fap,      EntityKind::srrh,     EntityKind::mrrh,
    EntityKind::fap_gateway, EntityKind::bbu_pool, EntityKind::mme_core,
};

/// Closed set of links a signaling message may traverse. SRRHs use the F-AP class links.
enum class LinkKind
{
    radio,       // F-UE <-> F-AP / SRRH / MRRH
    fap_gateway, // F-AP (SRRH) <-> F-AP gateway
    mrrh_bbu,    // MRRH <-> BBU pool
    gateway_core,
    gateway_bbu,
    bbu_core,
};

inline constexpr std::size_t kLinkKindCount = 6;
inline constexpr std::array<LinkKind, kLinkKindCount> kAllLinkKinds = {
    LinkKind::radio,        LinkKind::fap_gateway, LinkKind::mrrh_bbu,
    LinkKind::gateway_core, LinkKind::gateway_bbu, LinkKind::bbu_core,
};

std::string_view to_string(EntityKind kind) noexcept;
std::string_view to_string(LinkKind kind) noexcept;
EntityKind parse_entity_kind(std::string_view name);
LinkKind parse_link_kind(std::string_view name);

/// The link joining two adjacent entities, if the pair is in the closed link set.
std::optional<LinkKind> link_between(EntityKind a, EntityKind b) noexcept;

enum class Side
{
    none,
    source,
    target,
};

struct Endpoint
{
    EntityKind kind = EntityKind::fue;
    Side side = Side::none;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// One signaling message. A message with from == to and no relays is processed locally, once.
struct Message
{
    std::string name;
    Endpoint from;
    Endpoint to;
    std::vector<Endpoint> via;

    bool is_local() const noexcept { return via.empty() && from == to; }
    /// from, relays..., to (a single entry for local messages).
    std::vector<Endpoint> path() const;
};

enum class HandoverKind
{
    fap_to_fap,
    fap_to_mrrh,
    mrrh_to_fap,
    srrh_to_srrh,
    srrh_to_mrrh,
};

inline constexpr std::array<HandoverKind, 5> kAllHandoverKinds = {
    HandoverKind::fap_to_fap, HandoverKind::fap_to_mrrh, HandoverKind::mrrh_to_fap, HandoverKind::srrh_to_srrh,
    HandoverKind::srrh_to_mrrh,
};

enum class Procedure
{
    fran,
    non_fran,
};

std::string_view to_string(HandoverKind kind) noexcept;
std::string_view to_string(Procedure procedure) noexcept;
HandoverKind parse_handover_kind(std::string_view name);
Procedure parse_procedure(std::string_view name);

struct SignalingTrace
{
    HandoverKind handover_kind = HandoverKind::fap_to_fap;
    Procedure procedure = Procedure::fran;
    std::vector<Message> messages;
    /// Set for the FRAN MRRH -> F-AP procedure, which has to discover its target through the gateway.
    bool highest_complexity = false;

    /// Throws ContractViolation if a hop leaves the closed link set or the first message is not from the F-UE.
    void validate() const;
};

/// The canonical message sequence for a handover kind under a procedure.
SignalingTrace build_trace(HandoverKind kind, Procedure procedure);

/// One message per line: name<TAB>from<TAB>via...<TAB>to, e.g. "HandoverRequest  source-fap  fap_gateway  target-fap".
void write_trace(std::ostream& out, const SignalingTrace& trace);

class OverheadProfile
{
public:
    /// Defaults: processing F-UE 1, F-AP/SRRH 1, MRRH 2, gateway 2, BBU 4, MME 8;
    /// links radio 1, F-AP-gateway 2, MRRH-BBU 4, gateway-core 6, gateway-BBU 4, BBU-core 2.
    static OverheadProfile defaults();
    /// Every cost unset.
    static OverheadProfile empty() { return {}; }

    void set_processing(EntityKind kind, double cost);
    void set_link(LinkKind kind, double cost);
    /// Throw ConfigError naming the entity or link when unset.
    double processing(EntityKind kind) const;
    double link(LinkKind kind) const;
    bool has_processing(EntityKind kind) const { return processing_[index(kind)].has_value(); }
    bool has_link(LinkKind kind) const { return link_[index(kind)].has_value(); }

    /// Costs >= 0 and processing at F-UE and F-AP strictly below MME processing.
    void validate() const;

private:
    static std::size_t index(EntityKind kind) { return static_cast<std::size_t>(kind); }
    static std::size_t index(LinkKind kind) { return static_cast<std::size_t>(kind); }

    std::array<std::optional<double>, kEntityKindCount> processing_{};
    std::array<std::optional<double>, kLinkKindCount> link_{};
};

struct OverheadBreakdown
{
    double processing = 0.0;
    double transmitting = 0.0;

    double total() const noexcept { return processing + transmitting; }
};

/// Per-entity processing counts and per-link traversal counts of a trace.
struct TraceCounts
{
    std::array<std::size_t, kEntityKindCount> processing{};
    std::array<std::size_t, kLinkKindCount> links{};
};

TraceCounts count_trace(const SignalingTrace& trace);

OverheadBreakdown trace_overhead(const SignalingTrace& trace, const OverheadProfile& profile);

struct SessionModel
{
    double arrival_rate = 0.1;      // sessions per unit time
    double mean_holding_time = 5.0; // 1 / mu
    double residence_rate = 0.0;    // cell-boundary crossings per unit time

    double holding_rate() const noexcept { return 1.0 / mean_holding_time; }
    void validate() const;
};

/// Fluid-flow crossing rate v L / (pi A) of a circular cell of radius r, i.e. 2 v / (pi r).
double fluid_flow_residence_rate(double mean_speed, double cell_radius);

struct ScenarioProbabilities
{
    double p_s2 = 0.0;                          // first crossing of a session started in the cell
    double s1_expected = 0.0;                   // expected later crossings per session
    double expected_handovers_per_session = 0.0;
};

ScenarioProbabilities scenario_probabilities(const SessionModel& session);

using HandoverCosts = std::map<HandoverKind, double>;
using HandoverMix = std::map<HandoverKind, double>;

/// lambda * E[N] * sum_kind mix[kind] * cost[kind]. `mix` must sum to 1 within 1e-9.
double expected_overhead_rate(const SessionModel& session, const HandoverCosts& trace_costs, const HandoverMix& mix);

/// Whether a handover may happen. Under FRAN, MRRH -> F-AP/SRRH is refused above the threshold speed.
bool speed_gate(double speed, double threshold, EntityKind source, EntityKind target, Procedure procedure);

} // namespace fran

#endif // FRAN_HANDOVER_HPP
