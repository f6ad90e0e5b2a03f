#ifndef FRAN_RA_GAME_HPP
#define FRAN_RA_GAME_HPP

#include <fran/allocation.hpp>
#include <fran/core_model.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fran {

/**
 * Net utility of an F-UE is
 *
 *     R_f - price_coefficient * sum_k (p_fk * g(f, MRRH, k))^price_exponent
 *         + reward_coefficient * q_f
 *
 * where R_f is the F-UE's summed Shannon rate (bit/s), g(f, MRRH, k) the
 * cross-tier gain toward the MRRH and q_f the cache-hit ratio of the serving
 * F-AP (zero for MRRH-served users).
 */
struct UtilityParams
{
    double price_coefficient = 1e20;
    double price_exponent = 1.0;
    double reward_coefficient = 5e6;

    void validate() const;
};

struct GameSettings
{
    std::size_t max_iters = 100;
    double epsilon = 1e-9;

    void validate() const;
};

struct GameResult
{
    explicit GameResult(Allocation played) : allocation(std::move(played)) {}

    Allocation allocation;
    std::size_t iterations = 0;
    bool converged = false;
    double total_net_utility = 0.0;
    std::vector<std::pair<FueId, double>> per_fue_utility;
    /// Best-response updates that lowered a power index (zero along a monotone trajectory).
    std::size_t monotone_violations = 0;
    /// Best responses for which no level fit the power budget.
    std::size_t budget_saturations = 0;
};

enum class Scheme
{
    non_fran,
    existing_fran,
    proposed,
};

std::string_view to_string(Scheme scheme) noexcept;
/// Throws ConfigError for an unknown identifier.
Scheme parse_scheme(std::string_view name);
inline constexpr Scheme kAllSchemes[] = {Scheme::proposed, Scheme::existing_fran, Scheme::non_fran};

double net_utility(FueId fue, const Allocation& allocation, const ChannelRealization& channel,
                   const UtilityParams& uparams, const ChannelParams& cparams, const Topology& topology);

/// Net-utility gain of giving `subchannel` to `fue` at `probe_power`, assuming no co-channel interference.
double probe_utility(FueId fue, std::size_t subchannel, double probe_power, const ChannelRealization& channel,
                     const UtilityParams& uparams, const ChannelParams& cparams, NodeId server);

/**
 * Greedy interference-aware subchannel assignment, independently per F-AP.
 *
 * Subchannels are visited in index order and each goes to the cell's F-UE with
 * the largest probe utility at the grid's middle level (lowest id on ties).
 * Once the remaining subchannels only just cover the F-UEs still without one,
 * candidates are restricted to those F-UEs, so everyone gets a subchannel.
 * MRRH-served users take no part. All powers start at level 0.
 */
Allocation assign_subchannels(const Topology& topology, const ChannelRealization& channel,
                              const UtilityParams& uparams, const ChannelParams& cparams, const PowerGrid& grid);

struct BestResponse
{
    std::size_t level = 0;
    bool budget_saturated = false;
};

/// Utility-maximizing level for one (F-UE, subchannel) with everything else frozen; lower level on ties.
BestResponse best_response(FueId fue, std::size_t subchannel, const Allocation& allocation,
                           const ChannelRealization& channel, const UtilityParams& uparams,
                           const ChannelParams& cparams, const Topology& topology);

/// Round-robin sequential best response starting from all powers at level 0.
GameResult iterate_to_ne(Allocation allocation, const ChannelRealization& channel, const UtilityParams& uparams,
                         const ChannelParams& cparams, const Topology& topology, const GameSettings& settings);

/// True iff no single (F-UE, subchannel) move to another budget-feasible level gains more than epsilon.
bool verify_ne(const Allocation& allocation, const ChannelRealization& channel, const UtilityParams& uparams,
               const ChannelParams& cparams, const Topology& topology, double epsilon);

GameResult run_baseline(Scheme scheme, const Topology& topology, const ChannelRealization& channel,
                        const ChannelParams& cparams, const UtilityParams& uparams, const PowerGrid& grid,
                        const GameSettings& settings = {});

/// Total and per-F-UE net utility of every participating F-UE.
void evaluate_utilities(GameResult& result, const ChannelRealization& channel, const UtilityParams& uparams,
                        const ChannelParams& cparams, const Topology& topology);

// One CSV row per game: scheme,n_faps,n_fues_per_fap,seed,iterations,converged,total_net_utility
std::string game_csv_header();
std::string game_csv_row(const GameResult& result, Scheme scheme, std::size_t n_faps, std::size_t n_fues_per_fap,
                         std::uint64_t seed);

} // namespace fran

#endif // FRAN_RA_GAME_HPP
