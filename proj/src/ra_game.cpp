#include <fran/errors.hpp>
#include <fran/ra_game.hpp>
#include <fran/text.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace fran {

namespace {

// Relative slack on the total power budget so p_max itself is always feasible.
constexpr double kBudgetSlack = 1e-12;

bool within_budget(double total, const PowerGrid& grid)
{
    return total <= grid.max() * (1.0 + kBudgetSlack);
}

double price_term(double power, double cross_gain, const UtilityParams& uparams)
{
    if (uparams.price_coefficient == 0.0) {
        return 0.0;
    }
    const double received = power * cross_gain;
    return uparams.price_coefficient *
           (uparams.price_exponent == 1.0 ? received : std::pow(received, uparams.price_exponent));
}

using Score = std::function<double(FueId, std::size_t)>;

// Per cell, hand out subchannels in index order to the highest-scoring F-UE,
// reserving the tail so every F-UE of the cell ends up with one.
Allocation greedy_assign(const Topology& topology, std::size_t n_subchannels, const PowerGrid& grid,
                         const Score& score)
{
    Allocation alloc(topology, n_subchannels, grid);
    for (const auto& ap : topology.faps) {
        const auto users = topology.users_of(ap.id);
        if (users.empty()) {
            continue;
        }
        if (users.size() > n_subchannels) {
            throw InfeasibleError("F-AP " + std::to_string(to_index(ap.id)) + " serves " +
                                  std::to_string(users.size()) + " F-UEs but only " +
                                  std::to_string(n_subchannels) + " subchannels exist");
        }
        std::vector<bool> served(users.size(), false);
        std::size_t unserved = users.size();
        for (std::size_t k = 0; k < n_subchannels; ++k) {
            const bool reserve = (n_subchannels - k) <= unserved;
            std::size_t best = users.size();
            double best_score = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < users.size(); ++i) {
                if (reserve && served[i]) {
                    continue;
                }
                const double s = score(users[i], k);
                if (best == users.size() || s > best_score) {
                    best = i;
                    best_score = s;
                }
            }
            alloc.assign(users[best], k, 0);
            if (!served[best]) {
                served[best] = true;
                --unserved;
            }
        }
    }
    return alloc;
}

} // namespace

void UtilityParams::validate() const
{
    if (!(price_coefficient >= 0.0)) {
        throw ConfigError("utility.price_coefficient: must be >= 0");
    }
    if (!(price_exponent >= 1.0)) {
        throw ConfigError("utility.price_exponent: must be >= 1");
    }
    if (!(reward_coefficient >= 0.0)) {
        throw ConfigError("utility.reward_coefficient: must be >= 0");
    }
}

void GameSettings::validate() const
{
    if (max_iters < 1) {
        throw ConfigError("game.max_iters: must be >= 1");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("game.epsilon: must be > 0");
    }
}

std::string_view to_string(Scheme scheme) noexcept
{
    switch (scheme) {
    case Scheme::non_fran:
        return "non_fran";
    case Scheme::existing_fran:
        return "existing_fran";
    case Scheme::proposed:
        return "proposed";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name)
{
    for (auto s : kAllSchemes) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw ConfigError("unknown scheme '" + std::string(name) + "' (expected non_fran, existing_fran or proposed)");
}

double net_utility(FueId fue, const Allocation& allocation, const ChannelRealization& channel,
                   const UtilityParams& uparams, const ChannelParams& cparams, const Topology& topology)
{
    if (!allocation.participates(fue)) {
        throw ContractViolation("net_utility: F-UE " + std::to_string(to_index(fue)) + " holds no subchannel");
    }
    double value = uparams.reward_coefficient * topology.cache_hit_ratio_of(fue);
    for (const auto& a : allocation.assignments(fue)) {
        value += rate(sinr(fue, a.subchannel, allocation, channel, cparams), cparams);
        value -= price_term(allocation.grid()[a.level], channel.gain(fue, kMrrh, a.subchannel), uparams);
    }
    return value;
}

double probe_utility(FueId fue, std::size_t subchannel, double probe_power, const ChannelRealization& channel,
                     const UtilityParams& uparams, const ChannelParams& cparams, NodeId server)
{
    const double snr = probe_power * channel.gain(fue, server, subchannel) / cparams.noise_power;
    return rate(snr, cparams) - price_term(probe_power, channel.gain(fue, kMrrh, subchannel), uparams);
}

Allocation assign_subchannels(const Topology& topology, const ChannelRealization& channel,
                              const UtilityParams& uparams, const ChannelParams& cparams, const PowerGrid& grid)
{
    bool any = false;
    for (const auto& u : topology.fues) {
        any = any || !is_mrrh(u.serving_node);
    }
    if (!any) {
        throw ContractViolation("assign_subchannels: topology has no F-AP-served F-UE");
    }
    const double probe = grid[grid.mid_level()];
    return greedy_assign(topology, cparams.n_subchannels, grid, [&](FueId f, std::size_t k) {
        return probe_utility(f, k, probe, channel, uparams, cparams, topology.fue(f).serving_node);
    });
}

BestResponse best_response(FueId fue, std::size_t subchannel, const Allocation& allocation,
                           const ChannelRealization& channel, const UtilityParams& uparams,
                           const ChannelParams& cparams, const Topology& /*topology*/)
{
    const auto& grid = allocation.grid();
    const NodeId rx = allocation.serving_node(fue);
    const double others_power = allocation.total_power(fue) - allocation.power(fue, subchannel);

    double interference = 0.0;
    for (FueId other : allocation.users_on(subchannel)) {
        if (other != fue) {
            interference += allocation.power(other, subchannel) * channel.gain(other, rx, subchannel);
        }
    }
    const double own_gain = channel.gain(fue, rx, subchannel);
    const double cross_gain = channel.gain(fue, kMrrh, subchannel);
    const double denom = cparams.noise_power + interference;

    BestResponse out{0, true};
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t level = 0; level < grid.size(); ++level) {
        const double p = grid[level];
        if (!within_budget(others_power + p, grid)) {
            break; // levels are increasing, so every higher level is infeasible too
        }
        const double u = rate(p * own_gain / denom, cparams) - price_term(p, cross_gain, uparams);
        if (out.budget_saturated || u > best) {
            out = {level, false};
            best = u;
        }
    }
    return out;
}

GameResult iterate_to_ne(Allocation allocation, const ChannelRealization& channel, const UtilityParams& uparams,
                         const ChannelParams& cparams, const Topology& topology, const GameSettings& settings)
{
    settings.validate();
    const auto players = allocation.players();
    for (FueId f : players) {
        for (const auto& a : allocation.assignments(f)) {
            if (a.level != 0) {
                throw ContractViolation("iterate_to_ne: powers must start at grid level 0");
            }
        }
    }

    GameResult result(std::move(allocation));
    auto& alloc = result.allocation;
    for (std::size_t sweep = 1; sweep <= settings.max_iters; ++sweep) {
        bool changed = false;
        for (FueId f : players) {
            // Copy: set_level mutates the span we would iterate over.
            const std::vector<Assignment> mine(alloc.assignments(f).begin(), alloc.assignments(f).end());
            for (const auto& a : mine) {
                const auto current = alloc.level(f, a.subchannel);
                const auto br = best_response(f, a.subchannel, alloc, channel, uparams, cparams, topology);
                if (br.budget_saturated) {
                    ++result.budget_saturations;
                }
                if (br.level != current) {
                    if (br.level < current) {
                        ++result.monotone_violations;
                    }
                    alloc.set_level(f, a.subchannel, br.level);
                    changed = true;
                }
            }
        }
        result.iterations = sweep;
        if (!changed) {
            result.converged = true;
            break;
        }
    }
    evaluate_utilities(result, channel, uparams, cparams, topology);
    return result;
}

bool verify_ne(const Allocation& allocation, const ChannelRealization& channel, const UtilityParams& uparams,
               const ChannelParams& cparams, const Topology& topology, double epsilon)
{
    const auto& grid = allocation.grid();
    Allocation trial = allocation;
    for (FueId f : allocation.players()) {
        const double base = net_utility(f, allocation, channel, uparams, cparams, topology);
        const double total = allocation.total_power(f);
        for (const auto& a : allocation.assignments(f)) {
            const double others = total - grid[a.level];
            for (std::size_t level = 0; level < grid.size(); ++level) {
                if (level == a.level || !within_budget(others + grid[level], grid)) {
                    continue;
                }
                trial.set_level(f, a.subchannel, level);
                const double deviated = net_utility(f, trial, channel, uparams, cparams, topology);
                trial.set_level(f, a.subchannel, a.level);
                if (deviated > base + epsilon) {
                    return false;
                }
            }
        }
    }
    return true;
}

void evaluate_utilities(GameResult& result, const ChannelRealization& channel, const UtilityParams& uparams,
                        const ChannelParams& cparams, const Topology& topology)
{
    result.per_fue_utility.clear();
    result.total_net_utility = 0.0;
    for (FueId f : result.allocation.players()) {
        const double u = net_utility(f, result.allocation, channel, uparams, cparams, topology);
        result.per_fue_utility.emplace_back(f, u);
        result.total_net_utility += u;
    }
}

GameResult run_baseline(Scheme scheme, const Topology& topology, const ChannelRealization& channel,
                        const ChannelParams& cparams, const UtilityParams& uparams, const PowerGrid& grid,
                        const GameSettings& settings)
{
    switch (scheme) {
    case Scheme::proposed: {
        auto alloc = assign_subchannels(topology, channel, uparams, cparams, grid);
        return iterate_to_ne(std::move(alloc), channel, uparams, cparams, topology, settings);
    }
    case Scheme::existing_fran: {
        UtilityParams no_reward = uparams;
        no_reward.reward_coefficient = 0.0;
        auto alloc = assign_subchannels(topology, channel, no_reward, cparams, grid);
        auto result = iterate_to_ne(std::move(alloc), channel, no_reward, cparams, topology, settings);
        evaluate_utilities(result, channel, uparams, cparams, topology);
        return result;
    }
    case Scheme::non_fran: {
        auto alloc = greedy_assign(topology, cparams.n_subchannels, grid, [&](FueId f, std::size_t k) {
            return channel.gain(f, topology.fue(f).serving_node, k);
        });
        for (FueId f : alloc.players()) {
            const auto count = static_cast<double>(alloc.assignments(f).size());
            std::size_t level = 0;
            for (std::size_t l = grid.size(); l-- > 0;) {
                if (within_budget(count * grid[l], grid)) {
                    level = l;
                    break;
                }
            }
            const std::vector<Assignment> mine(alloc.assignments(f).begin(), alloc.assignments(f).end());
            for (const auto& a : mine) {
                alloc.set_level(f, a.subchannel, level);
            }
        }
        GameResult result(std::move(alloc));
        evaluate_utilities(result, channel, uparams, cparams, topology);
        return result;
    }
    }
    throw ConfigError("unknown scheme");
}

std::string game_csv_header()
{
    return "scheme,n_faps,n_fues_per_fap,seed,iterations,converged,total_net_utility";
}

std::string game_csv_row(const GameResult& result, Scheme scheme, std::size_t n_faps, std::size_t n_fues_per_fap,
                         std::uint64_t seed)
{
    std::ostringstream os;
    os << to_string(scheme) << ',' << n_faps << ',' << n_fues_per_fap << ',' << seed << ',' << result.iterations
       << ',' << (result.converged ? "true" : "false") << ',' << format_number(result.total_net_utility);
    return os.str();
}

} // namespace fran
