#ifndef FRAN_CORE_MODEL_HPP
#define FRAN_CORE_MODEL_HPP

#include <fran/random.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fran {

class Allocation;

enum class FueId : std::uint32_t {};

/// Receiving node. Value 0 is the MRRH; F-AP number i (0-based) is node i + 1.
enum class NodeId : std::uint32_t {};

inline constexpr NodeId kMrrh{0};

constexpr std::size_t to_index(FueId id) noexcept { return static_cast<std::size_t>(id); }
constexpr std::size_t to_index(NodeId id) noexcept { return static_cast<std::size_t>(id); }
constexpr NodeId fap_node(std::size_t fap_index) noexcept { return NodeId(static_cast<std::uint32_t>(fap_index + 1)); }
constexpr bool is_mrrh(NodeId id) noexcept { return id == kMrrh; }

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

double distance(Point2 a, Point2 b) noexcept;

struct FogAccessPoint
{
    NodeId id{};
    Point2 position;
    double radius = 0.0;
    double cache_hit_ratio = 0.0;
};

struct FogUser
{
    FueId id{};
    Point2 position;
    NodeId serving_node = kMrrh;
    double speed = 0.0;
};

/// Static deployment: one MRRH at the origin, F-APs inside its disc, F-UEs inside their server's disc.
struct Topology
{
    Point2 mrrh_position;
    double mrrh_radius = 0.0;
    std::vector<FogAccessPoint> faps;
    std::vector<FogUser> fues;

    /// Number of receivers addressable in a ChannelRealization (MRRH + F-APs).
    std::size_t receiver_count() const noexcept { return faps.size() + 1; }
    Point2 receiver_position(NodeId node) const;
    double receiver_radius(NodeId node) const;
    const FogUser& fue(FueId id) const;
    /// Cache-hit ratio of the serving F-AP; 0 for MRRH-served users.
    double cache_hit_ratio_of(FueId id) const;
    std::vector<FueId> users_of(NodeId node) const;

    /// Throws ConfigError naming the first broken invariant.
    void validate() const;
};

struct TopologyConfig
{
    double mrrh_radius = 500.0;
    std::size_t n_faps = 10;
    std::size_t n_fues_per_fap = 4;
    std::size_t n_macro_fues = 0;
    double fap_radius = 50.0;
    /// F-AP centres keep at least this distance from the MRRH (uniform over the annulus).
    double fap_min_distance = 100.0;
    double speed_low = 1.0;
    double speed_high = 20.0;
    double p_high_speed = 0.3;
    double cache_hit_min = 0.2;
    double cache_hit_max = 0.8;

    void validate() const;
};

struct ChannelParams
{
    double pathloss_exponent = 3.76;
    double reference_gain = 1e-3; // -30 dB at 1 m
    double noise_power = 0.0;     // W per subchannel
    double bandwidth = 180e3;     // Hz per subchannel
    std::size_t n_subchannels = 8;

    /// Thermal noise of -174 dBm/Hz over `bandwidth`.
    static double thermal_noise(double bandwidth_hz) noexcept;
    static ChannelParams defaults();

    void validate() const;
};

inline constexpr double kMinLinkDistance = 1.0;

/// Deterministic part of the link gain: K * max(d, 1 m)^(-gamma).
double path_gain(const ChannelParams& params, double distance_m) noexcept;

/// Uplink power gains for every (F-UE, receiver, subchannel) triple.
class ChannelRealization
{
public:
    ChannelRealization() = default;
    ChannelRealization(std::size_t n_fues, std::size_t n_receivers, std::size_t n_subchannels);

    double gain(FueId fue, NodeId rx, std::size_t subchannel) const;
    void set_gain(FueId fue, NodeId rx, std::size_t subchannel, double value);

    std::size_t fue_count() const noexcept { return n_fues_; }
    std::size_t receiver_count() const noexcept { return n_receivers_; }
    std::size_t subchannel_count() const noexcept { return n_subchannels_; }

private:
    std::size_t offset(FueId fue, NodeId rx, std::size_t subchannel) const;

    std::size_t n_fues_ = 0;
    std::size_t n_receivers_ = 0;
    std::size_t n_subchannels_ = 0;
    std::vector<double> gains_;
};

Topology generate_topology(const TopologyConfig& config, Rng& rng);

/// Path loss times an independent exponential(1) fading draw per (F-UE, receiver, subchannel).
ChannelRealization draw_channel(const Topology& topology, const ChannelParams& params, Rng& rng);

/// Uplink SINR of `fue` on `subchannel` at its serving node. Every other F-UE on
/// the subchannel (in any cell) contributes interference.
double sinr(FueId fue, std::size_t subchannel, const Allocation& allocation, const ChannelRealization& channel,
            const ChannelParams& params);

/// Shannon rate B log2(1 + sinr) in bit/s.
double rate(double sinr_value, const ChannelParams& params);

/// Sum of the F-UE's rates over all subchannels it holds.
double total_rate(FueId fue, const Allocation& allocation, const ChannelRealization& channel,
                  const ChannelParams& params);

// Tab-separated debug dumps. Topology columns:
//   kind  id  x  y  radius_or_serving  speed_or_cache_hit
// with kind in {mrrh, fap, fue}. Channel columns:
//   fue  rx  subchannel  gain
void dump_topology(std::ostream& out, const Topology& topology);
void dump_channel(std::ostream& out, const ChannelRealization& channel);

} // namespace fran

#endif // FRAN_CORE_MODEL_HPP
