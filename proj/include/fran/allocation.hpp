#ifndef FRAN_ALLOCATION_HPP
#define FRAN_ALLOCATION_HPP

#include <fran/core_model.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fran {

/// Discrete transmit power levels in watts, strictly increasing.
class PowerGrid
{
public:
    explicit PowerGrid(std::vector<double> levels);

    /// `count` levels spaced logarithmically between p_min and p_max (both > 0).
    static PowerGrid logarithmic(double p_min, double p_max, std::size_t count);
    static PowerGrid defaults() { return logarithmic(1e-3, 0.2, 10); }

    std::size_t size() const noexcept { return levels_.size(); }
    double operator[](std::size_t level) const { return levels_.at(level); }
    double min() const noexcept { return levels_.front(); }
    double max() const noexcept { return levels_.back(); }
    std::size_t max_level() const noexcept { return levels_.size() - 1; }
    std::size_t mid_level() const noexcept { return levels_.size() / 2; }
    std::span<const double> levels() const noexcept { return levels_; }

private:
    std::vector<double> levels_;
};

struct Assignment
{
    std::size_t subchannel = 0;
    std::size_t level = 0;
};

/**
 * Subchannel assignment plus a power level per assigned (F-UE, subchannel).
 *
 * The serving node of every F-UE is captured at construction, so SINR can be
 * evaluated without the topology. Mutators keep intra-cell orthogonality: two
 * F-UEs with the same serving node never share a subchannel.
 */
class Allocation
{
public:
    Allocation(const Topology& topology, std::size_t n_subchannels, PowerGrid grid);

    void assign(FueId fue, std::size_t subchannel, std::size_t level = 0);
    void set_level(FueId fue, std::size_t subchannel, std::size_t level);

    bool is_assigned(FueId fue, std::size_t subchannel) const;
    /// Throws ContractViolation when the pair is unassigned.
    std::size_t level(FueId fue, std::size_t subchannel) const;
    double power(FueId fue, std::size_t subchannel) const;
    double total_power(FueId fue) const;
    /// True when the F-UE holds at least one subchannel.
    bool participates(FueId fue) const;
    std::span<const Assignment> assignments(FueId fue) const;
    std::span<const FueId> users_on(std::size_t subchannel) const;
    /// True when some F-UE served by `node` already holds `subchannel`.
    bool cell_uses(NodeId node, std::size_t subchannel) const;

    NodeId serving_node(FueId fue) const { return serving_.at(to_index(fue)); }
    const PowerGrid& grid() const noexcept { return grid_; }
    std::size_t fue_count() const noexcept { return serving_.size(); }
    std::size_t subchannel_count() const noexcept { return n_subchannels_; }
    /// F-UEs holding at least one subchannel, in id order.
    std::vector<FueId> players() const;

    friend bool operator==(const Allocation& a, const Allocation& b);

private:
    static constexpr std::uint16_t kUnassigned = 0xffff;

    std::size_t slot(FueId fue, std::size_t subchannel) const;

    PowerGrid grid_;
    std::size_t n_subchannels_;
    std::vector<NodeId> serving_;
    std::vector<std::uint16_t> levels_;              // fue-major, kUnassigned when free
    std::vector<std::vector<Assignment>> by_fue_;    // sorted by subchannel
    std::vector<std::vector<FueId>> by_subchannel_;  // sorted by fue id
};

} // namespace fran

#endif // FRAN_ALLOCATION_HPP
