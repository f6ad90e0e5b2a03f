#ifndef FRAN_CONFIG_HPP
#define FRAN_CONFIG_HPP

#include <fran/sim_engine.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace fran {

/**
 * INI-style configuration. Sections and keys (all optional):
 *
 *   [sim]       horizon, seed, replications, snapshots
 *   [session]   arrival_rate, mean_holding_time, residence_rate
 *   [topology]  mrrh_radius, n_faps, n_fues_per_fap, n_macro_fues, fap_radius, fap_min_distance,
 *               speed_low, speed_high, p_high_speed, cache_hit_min, cache_hit_max
 *   [channel]   pathloss_exponent, reference_gain_db, noise_psd_dbm_hz,
 *               noise_power_w, bandwidth_hz, n_subchannels
 *   [utility]   price_coefficient, price_exponent, reward_coefficient
 *   [power]     p_min_w, p_max_w, n_levels
 *   [game]      max_iters, epsilon
 *   [handover]  procedure, speed_threshold, mix_<kind> for each handover kind
 *   [overhead]  processing_<entity>, link_<link>
 *   [sweep]     study, param, values   (custom experiment only)
 *
 * When residence_rate is absent it follows the fluid-flow model of an F-AP
 * cell at the mean F-UE speed. Giving any mix_<kind> replaces the whole mix.
 * Unknown sections or keys are rejected.
 */
struct ParsedConfig
{
    SimConfig sim;
    std::optional<Study> study;
    std::optional<Sweep> sweep;
};

ParsedConfig parse_config_text(std::istream& in, const std::string& source_name = "<config>");
/// Throws IoError when the file cannot be read, ConfigError on any invalid entry.
ParsedConfig parse_config_file(const std::filesystem::path& path);

/// Validated simulation configuration from a file.
SimConfig parse_config(const std::filesystem::path& path);

} // namespace fran

#endif // FRAN_CONFIG_HPP
