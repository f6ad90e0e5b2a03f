#include <fran/allocation.hpp>
#include <fran/core_model.hpp>
#include <fran/errors.hpp>
#include <fran/text.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace fran {

namespace {

Point2 uniform_in_annulus(Point2 center, double inner, double outer, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = std::sqrt(inner * inner + (outer * outer - inner * inner) * unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

Point2 uniform_in_disc(Point2 center, double radius, Rng& rng)
{
    return uniform_in_annulus(center, 0.0, radius, rng);
}

[[noreturn]] void invalid(const std::string& key, const std::string& constraint)
{
    throw ConfigError(key + ": " + constraint);
}

// Slack for points placed on the disc boundary by the sqrt/cos/sin round trip.
constexpr double kRadiusSlack = 1e-9;

} // namespace

double distance(Point2 a, Point2 b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

Point2 Topology::receiver_position(NodeId node) const
{
    if (is_mrrh(node)) {
        return mrrh_position;
    }
    return faps.at(to_index(node) - 1).position;
}

double Topology::receiver_radius(NodeId node) const
{
    if (is_mrrh(node)) {
        return mrrh_radius;
    }
    return faps.at(to_index(node) - 1).radius;
}

const FogUser& Topology::fue(FueId id) const
{
    return fues.at(to_index(id));
}

double Topology::cache_hit_ratio_of(FueId id) const
{
    const NodeId server = fue(id).serving_node;
    return is_mrrh(server) ? 0.0 : faps.at(to_index(server) - 1).cache_hit_ratio;
}

std::vector<FueId> Topology::users_of(NodeId node) const
{
    std::vector<FueId> out;
    for (const auto& u : fues) {
        if (u.serving_node == node) {
            out.push_back(u.id);
        }
    }
    return out;
}

void Topology::validate() const
{
    if (!(mrrh_radius > 0.0)) {
        invalid("mrrh_radius", "must be > 0");
    }
    for (std::size_t i = 0; i < faps.size(); ++i) {
        const auto& ap = faps[i];
        const std::string name = "fap[" + std::to_string(i) + "]";
        if (ap.id != fap_node(i)) {
            invalid(name, "id out of sequence");
        }
        if (!(ap.radius > 0.0)) {
            invalid(name + ".radius", "must be > 0");
        }
        if (ap.cache_hit_ratio < 0.0 || ap.cache_hit_ratio > 1.0) {
            invalid(name + ".cache_hit_ratio", "must lie in [0, 1]");
        }
        if (distance(ap.position, mrrh_position) > mrrh_radius + kRadiusSlack) {
            invalid(name + ".position", "outside the MRRH coverage disc");
        }
    }
    for (std::size_t i = 0; i < fues.size(); ++i) {
        const auto& u = fues[i];
        const std::string name = "fue[" + std::to_string(i) + "]";
        if (to_index(u.id) != i) {
            invalid(name, "id out of sequence");
        }
        if (to_index(u.serving_node) > faps.size()) {
            invalid(name + ".serving_node", "unknown node");
        }
        if (distance(u.position, receiver_position(u.serving_node)) > receiver_radius(u.serving_node) + kRadiusSlack) {
            invalid(name + ".position", "outside its serving node's coverage disc");
        }
        if (u.speed < 0.0) {
            invalid(name + ".speed", "must be >= 0");
        }
    }
}

void TopologyConfig::validate() const
{
    if (!(mrrh_radius > 0.0)) {
        invalid("topology.mrrh_radius", "must be > 0");
    }
    if (!(fap_radius > 0.0)) {
        invalid("topology.fap_radius", "must be > 0");
    }
    if (fap_radius > mrrh_radius) {
        invalid("topology.fap_radius", "must not exceed mrrh_radius");
    }
    if (!(fap_min_distance >= 0.0) || fap_min_distance >= mrrh_radius) {
        invalid("topology.fap_min_distance", "must lie in [0, mrrh_radius)");
    }
    if (speed_low < 0.0) {
        invalid("topology.speed_low", "must be >= 0");
    }
    if (speed_high < speed_low) {
        invalid("topology.speed_high", "must be >= speed_low");
    }
    if (p_high_speed < 0.0 || p_high_speed > 1.0) {
        invalid("topology.p_high_speed", "must lie in [0, 1]");
    }
    if (cache_hit_min < 0.0 || cache_hit_max > 1.0 || cache_hit_min > cache_hit_max) {
        invalid("topology.cache_hit_min/cache_hit_max", "must satisfy 0 <= min <= max <= 1");
    }
}

double ChannelParams::thermal_noise(double bandwidth_hz) noexcept
{
    // -174 dBm/Hz = 10^(-17.4) mW/Hz = 10^(-20.4) W/Hz
    return std::pow(10.0, -20.4) * bandwidth_hz;
}

ChannelParams ChannelParams::defaults()
{
    ChannelParams p;
    p.noise_power = thermal_noise(p.bandwidth);
    return p;
}

void ChannelParams::validate() const
{
    if (!(pathloss_exponent > 2.0)) {
        invalid("channel.pathloss_exponent", "must be > 2");
    }
    if (!(reference_gain > 0.0)) {
        invalid("channel.reference_gain", "must be > 0");
    }
    if (!(noise_power > 0.0)) {
        invalid("channel.noise_power", "must be > 0");
    }
    if (!(bandwidth > 0.0)) {
        invalid("channel.bandwidth", "must be > 0");
    }
    if (n_subchannels < 1) {
        invalid("channel.n_subchannels", "must be >= 1");
    }
}

double path_gain(const ChannelParams& params, double distance_m) noexcept
{
    const double d = std::max(distance_m, kMinLinkDistance);
    return params.reference_gain * std::pow(d, -params.pathloss_exponent);
}

ChannelRealization::ChannelRealization(std::size_t n_fues, std::size_t n_receivers, std::size_t n_subchannels)
    : n_fues_(n_fues), n_receivers_(n_receivers), n_subchannels_(n_subchannels),
      gains_(n_fues * n_receivers * n_subchannels, 0.0)
{
}

std::size_t ChannelRealization::offset(FueId fue, NodeId rx, std::size_t subchannel) const
{
    const auto f = to_index(fue);
    const auto r = to_index(rx);
    if (f >= n_fues_ || r >= n_receivers_ || subchannel >= n_subchannels_) {
        throw ContractViolation("channel gain index out of range");
    }
    return (f * n_receivers_ + r) * n_subchannels_ + subchannel;
}

double ChannelRealization::gain(FueId fue, NodeId rx, std::size_t subchannel) const
{
    return gains_[offset(fue, rx, subchannel)];
}

void ChannelRealization::set_gain(FueId fue, NodeId rx, std::size_t subchannel, double value)
{
    if (!(value > 0.0)) {
        throw ContractViolation("channel gains must be > 0");
    }
    gains_[offset(fue, rx, subchannel)] = value;
}

Topology generate_topology(const TopologyConfig& config, Rng& rng)
{
    config.validate();

    Topology topo;
    topo.mrrh_radius = config.mrrh_radius;

    std::uniform_real_distribution<double> hit(config.cache_hit_min, config.cache_hit_max);
    topo.faps.reserve(config.n_faps);
    for (std::size_t i = 0; i < config.n_faps; ++i) {
        FogAccessPoint ap;
        ap.id = fap_node(i);
        ap.position = uniform_in_annulus(topo.mrrh_position, config.fap_min_distance, config.mrrh_radius, rng);
        ap.radius = config.fap_radius;
        ap.cache_hit_ratio = hit(rng);
        topo.faps.push_back(ap);
    }

    std::bernoulli_distribution fast(config.p_high_speed);
    auto add_user = [&](Point2 pos, NodeId server) {
        FogUser u;
        u.id = FueId(static_cast<std::uint32_t>(topo.fues.size()));
        u.position = pos;
        u.serving_node = server;
        u.speed = fast(rng) ? config.speed_high : config.speed_low;
        topo.fues.push_back(u);
    };

    for (const auto& ap : topo.faps) {
        for (std::size_t j = 0; j < config.n_fues_per_fap; ++j) {
            add_user(uniform_in_disc(ap.position, ap.radius, rng), ap.id);
        }
    }
    for (std::size_t j = 0; j < config.n_macro_fues; ++j) {
        add_user(uniform_in_disc(topo.mrrh_position, topo.mrrh_radius, rng), kMrrh);
    }
    return topo;
}

ChannelRealization draw_channel(const Topology& topology, const ChannelParams& params, Rng& rng)
{
    ChannelRealization ch(topology.fues.size(), topology.receiver_count(), params.n_subchannels);
    std::exponential_distribution<double> fading(1.0);
    for (const auto& u : topology.fues) {
        for (std::size_t r = 0; r < topology.receiver_count(); ++r) {
            const NodeId rx{static_cast<std::uint32_t>(r)};
            const double mean = path_gain(params, distance(u.position, topology.receiver_position(rx)));
            for (std::size_t k = 0; k < params.n_subchannels; ++k) {
                double x = fading(rng);
                // exponential_distribution can return exactly 0 with probability ~2^-53
                while (!(x > 0.0)) {
                    x = fading(rng);
                }
                ch.set_gain(u.id, rx, k, mean * x);
            }
        }
    }
    return ch;
}

double sinr(FueId fue, std::size_t subchannel, const Allocation& allocation, const ChannelRealization& channel,
            const ChannelParams& params)
{
    if (!allocation.is_assigned(fue, subchannel)) {
        throw ContractViolation("sinr: F-UE " + std::to_string(to_index(fue)) + " is not assigned subchannel " +
                                std::to_string(subchannel));
    }
    const NodeId rx = allocation.serving_node(fue);
    const double signal = allocation.power(fue, subchannel) * channel.gain(fue, rx, subchannel);
    double interference = 0.0;
    for (FueId other : allocation.users_on(subchannel)) {
        if (other != fue) {
            interference += allocation.power(other, subchannel) * channel.gain(other, rx, subchannel);
        }
    }
    return signal / (params.noise_power + interference);
}

double rate(double sinr_value, const ChannelParams& params)
{
    if (sinr_value < 0.0 || std::isnan(sinr_value)) {
        throw ContractViolation("rate: SINR must be >= 0");
    }
    return params.bandwidth * std::log2(1.0 + sinr_value);
}

double total_rate(FueId fue, const Allocation& allocation, const ChannelRealization& channel,
                  const ChannelParams& params)
{
    double sum = 0.0;
    for (const auto& a : allocation.assignments(fue)) {
        sum += rate(sinr(fue, a.subchannel, allocation, channel, params), params);
    }
    return sum;
}

void dump_topology(std::ostream& out, const Topology& topology)
{
    out << "mrrh\t0\t" << format_number(topology.mrrh_position.x) << '\t' << format_number(topology.mrrh_position.y)
        << '\t' << format_number(topology.mrrh_radius) << "\t0\n";
    for (const auto& ap : topology.faps) {
        out << "fap\t" << to_index(ap.id) << '\t' << format_number(ap.position.x) << '\t'
            << format_number(ap.position.y) << '\t' << format_number(ap.radius) << '\t'
            << format_number(ap.cache_hit_ratio) << '\n';
    }
    for (const auto& u : topology.fues) {
        out << "fue\t" << to_index(u.id) << '\t' << format_number(u.position.x) << '\t'
            << format_number(u.position.y) << '\t' << to_index(u.serving_node) << '\t' << format_number(u.speed)
            << '\n';
    }
}

void dump_channel(std::ostream& out, const ChannelRealization& channel)
{
    for (std::size_t f = 0; f < channel.fue_count(); ++f) {
        for (std::size_t r = 0; r < channel.receiver_count(); ++r) {
            for (std::size_t k = 0; k < channel.subchannel_count(); ++k) {
                out << f << '\t' << r << '\t' << k << '\t'
                    << format_number(channel.gain(FueId(static_cast<std::uint32_t>(f)),
                                                  NodeId(static_cast<std::uint32_t>(r)), k))
                    << '\n';
            }
        }
    }
}

} // namespace fran
