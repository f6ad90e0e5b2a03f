#include <fran/allocation.hpp>
#include <fran/errors.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace fran {

PowerGrid::PowerGrid(std::vector<double> levels) : levels_(std::move(levels))
{
    if (levels_.empty()) {
        throw ConfigError("power grid: must contain at least one level");
    }
    if (levels_.size() >= 0xffff) {
        throw ConfigError("power grid: too many levels");
    }
    if (levels_.front() < 0.0) {
        throw ConfigError("power grid: p_min must be >= 0");
    }
    for (std::size_t i = 1; i < levels_.size(); ++i) {
        if (!(levels_[i] > levels_[i - 1])) {
            throw ConfigError("power grid: levels must be strictly increasing");
        }
    }
}

PowerGrid PowerGrid::logarithmic(double p_min, double p_max, std::size_t count)
{
    if (count == 0) {
        throw ConfigError("power.n_levels: must be >= 1");
    }
    if (!(p_min > 0.0) || !(p_max >= p_min)) {
        throw ConfigError("power.p_min/p_max: must satisfy 0 < p_min <= p_max");
    }
    if (count == 1) {
        return PowerGrid({p_max});
    }
    if (!(p_max > p_min)) {
        throw ConfigError("power.p_min/p_max: need p_max > p_min for more than one level");
    }
    std::vector<double> levels(count);
    const double ratio = std::log(p_max / p_min);
    for (std::size_t i = 0; i < count; ++i) {
        levels[i] = p_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    levels.front() = p_min;
    levels.back() = p_max;
    return PowerGrid(std::move(levels));
}

Allocation::Allocation(const Topology& topology, std::size_t n_subchannels, PowerGrid grid)
    : grid_(std::move(grid)), n_subchannels_(n_subchannels), by_fue_(topology.fues.size()),
      by_subchannel_(n_subchannels)
{
    serving_.reserve(topology.fues.size());
    for (const auto& u : topology.fues) {
        serving_.push_back(u.serving_node);
    }
    levels_.assign(serving_.size() * n_subchannels_, kUnassigned);
}

std::size_t Allocation::slot(FueId fue, std::size_t subchannel) const
{
    if (to_index(fue) >= serving_.size() || subchannel >= n_subchannels_) {
        throw ContractViolation("allocation index out of range");
    }
    return to_index(fue) * n_subchannels_ + subchannel;
}

bool Allocation::cell_uses(NodeId node, std::size_t subchannel) const
{
    const auto& users = by_subchannel_.at(subchannel);
    return std::any_of(users.begin(), users.end(), [&](FueId u) { return serving_[to_index(u)] == node; });
}

void Allocation::assign(FueId fue, std::size_t subchannel, std::size_t level)
{
    const auto s = slot(fue, subchannel);
    if (levels_[s] != kUnassigned) {
        throw ContractViolation("subchannel already assigned to this F-UE");
    }
    if (level >= grid_.size()) {
        throw ContractViolation("power level out of range");
    }
    if (cell_uses(serving_node(fue), subchannel)) {
        throw ContractViolation("intra-cell orthogonality: subchannel " + std::to_string(subchannel) +
                                " already used in this cell");
    }
    levels_[s] = static_cast<std::uint16_t>(level);

    auto& mine = by_fue_[to_index(fue)];
    mine.insert(std::upper_bound(mine.begin(), mine.end(), subchannel,
                                 [](std::size_t k, const Assignment& a) { return k < a.subchannel; }),
                Assignment{subchannel, level});
    auto& on = by_subchannel_[subchannel];
    on.insert(std::upper_bound(on.begin(), on.end(), fue), fue);
}

void Allocation::set_level(FueId fue, std::size_t subchannel, std::size_t level)
{
    const auto s = slot(fue, subchannel);
    if (levels_[s] == kUnassigned) {
        throw ContractViolation("set_level on an unassigned (F-UE, subchannel) pair");
    }
    if (level >= grid_.size()) {
        throw ContractViolation("power level out of range");
    }
    levels_[s] = static_cast<std::uint16_t>(level);
    for (auto& a : by_fue_[to_index(fue)]) {
        if (a.subchannel == subchannel) {
            a.level = level;
        }
    }
}

bool Allocation::is_assigned(FueId fue, std::size_t subchannel) const
{
    if (to_index(fue) >= serving_.size() || subchannel >= n_subchannels_) {
        return false;
    }
    return levels_[slot(fue, subchannel)] != kUnassigned;
}

std::size_t Allocation::level(FueId fue, std::size_t subchannel) const
{
    const auto v = levels_[slot(fue, subchannel)];
    if (v == kUnassigned) {
        throw ContractViolation("F-UE " + std::to_string(to_index(fue)) + " is not assigned subchannel " +
                                std::to_string(subchannel));
    }
    return v;
}

double Allocation::power(FueId fue, std::size_t subchannel) const
{
    return grid_[level(fue, subchannel)];
}

double Allocation::total_power(FueId fue) const
{
    double sum = 0.0;
    for (const auto& a : assignments(fue)) {
        sum += grid_[a.level];
    }
    return sum;
}

bool Allocation::participates(FueId fue) const
{
    return to_index(fue) < by_fue_.size() && !by_fue_[to_index(fue)].empty();
}

std::span<const Assignment> Allocation::assignments(FueId fue) const
{
    return by_fue_.at(to_index(fue));
}

std::span<const FueId> Allocation::users_on(std::size_t subchannel) const
{
    return by_subchannel_.at(subchannel);
}

std::vector<FueId> Allocation::players() const
{
    std::vector<FueId> out;
    for (std::size_t f = 0; f < by_fue_.size(); ++f) {
        if (!by_fue_[f].empty()) {
            out.push_back(FueId(static_cast<std::uint32_t>(f)));
        }
    }
    return out;
}

bool operator==(const Allocation& a, const Allocation& b)
{
    return a.n_subchannels_ == b.n_subchannels_ && a.serving_ == b.serving_ && a.levels_ == b.levels_ &&
           std::equal(a.grid_.levels().begin(), a.grid_.levels().end(), b.grid_.levels().begin(),
                      b.grid_.levels().end());
}

} // namespace fran
