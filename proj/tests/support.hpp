#ifndef FRAN_TESTS_SUPPORT_HPP
#define FRAN_TESTS_SUPPORT_HPP

#include <fran/allocation.hpp>
#include <fran/core_model.hpp>
#include <fran/ra_game.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace fran::test {

// Hand-built topology: F-AP i at (100 (i + 1), 0), F-UEs listed by serving F-AP index.
inline Topology line_topology(const std::vector<std::size_t>& server_of_fue, std::size_t n_faps,
                              double cache_hit = 0.5)
{
    Topology t;
    t.mrrh_radius = 500.0;
    for (std::size_t i = 0; i < n_faps; ++i) {
        t.faps.push_back({fap_node(i), {100.0 * static_cast<double>(i + 1), 0.0}, 50.0, cache_hit});
    }
    for (std::size_t f = 0; f < server_of_fue.size(); ++f) {
        const auto& ap = t.faps.at(server_of_fue[f]);
        t.fues.push_back({FueId(static_cast<std::uint32_t>(f)), {ap.position.x + 10.0, 5.0}, ap.id, 1.0});
    }
    return t;
}

inline ChannelParams unit_channel(std::size_t n_subchannels, double noise = 1e-9, double bandwidth = 1.0)
{
    ChannelParams c;
    c.noise_power = noise;
    c.bandwidth = bandwidth;
    c.n_subchannels = n_subchannels;
    return c;
}

// Straight-from-the-definition utility, no library helpers beyond data access.
inline double oracle_utility(FueId f, const Allocation& a, const ChannelRealization& ch, const UtilityParams& u,
                             const ChannelParams& c, const Topology& t)
{
    double value = u.reward_coefficient * t.cache_hit_ratio_of(f);
    const NodeId rx = t.fue(f).serving_node;
    for (std::size_t k = 0; k < a.subchannel_count(); ++k) {
        if (!a.is_assigned(f, k)) {
            continue;
        }
        double interference = 0.0;
        for (std::size_t o = 0; o < t.fues.size(); ++o) {
            const auto other = FueId(static_cast<std::uint32_t>(o));
            if (other != f && a.is_assigned(other, k)) {
                interference += a.power(other, k) * ch.gain(other, rx, k);
            }
        }
        const double p = a.power(f, k);
        value += c.bandwidth * std::log2(1.0 + p * ch.gain(f, rx, k) / (c.noise_power + interference));
        value -= u.price_coefficient * std::pow(p * ch.gain(f, kMrrh, k), u.price_exponent);
    }
    return value;
}

inline bool budget_ok(const Allocation& a, FueId f)
{
    return a.total_power(f) <= a.grid().max() * (1.0 + 1e-12);
}

// Every budget-feasible pure profile of the assigned (F-UE, subchannel) slots,
// with no profitable single-slot deviation.
inline std::vector<Allocation> brute_force_ne(const Allocation& start, const ChannelRealization& ch,
                                              const UtilityParams& u, const ChannelParams& c, const Topology& t,
                                              double epsilon)
{
    struct Slot
    {
        FueId fue;
        std::size_t sub;
    };
    std::vector<Slot> slots;
    for (FueId f : start.players()) {
        for (const auto& a : start.assignments(f)) {
            slots.push_back({f, a.subchannel});
        }
    }
    const std::size_t levels = start.grid().size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        total *= levels;
    }

    std::vector<Allocation> out;
    for (std::size_t code = 0; code < total; ++code) {
        Allocation a = start;
        std::size_t rest = code;
        for (const auto& s : slots) {
            a.set_level(s.fue, s.sub, rest % levels);
            rest /= levels;
        }
        bool feasible = true;
        for (FueId f : a.players()) {
            feasible = feasible && budget_ok(a, f);
        }
        if (!feasible) {
            continue;
        }
        bool stable = true;
        for (const auto& s : slots) {
            const double base = oracle_utility(s.fue, a, ch, u, c, t);
            const std::size_t current = a.level(s.fue, s.sub);
            for (std::size_t l = 0; l < levels && stable; ++l) {
                if (l == current) {
                    continue;
                }
                Allocation d = a;
                d.set_level(s.fue, s.sub, l);
                if (budget_ok(d, s.fue) && oracle_utility(s.fue, d, ch, u, c, t) > base + epsilon) {
                    stable = false;
                }
            }
            if (!stable) {
                break;
            }
        }
        if (stable) {
            out.push_back(a);
        }
    }
    return out;
}

} // namespace fran::test

#endif // FRAN_TESTS_SUPPORT_HPP
