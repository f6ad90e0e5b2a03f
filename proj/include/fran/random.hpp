#ifndef FRAN_RANDOM_HPP
#define FRAN_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fran {

using Rng = std::mt19937_64;

/// One round of the splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/**
 * Derive an independent stream seed from a base seed and a path of counters
 * (sweep point, replication, snapshot, ...). Each counter is folded in with a
 * splitmix64 round, so distinct paths give decorrelated streams.
 */
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t s = splitmix64(base);
    for (auto c : path) {
        s = splitmix64(s ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    }
    return s;
}

} // namespace fran

#endif // FRAN_RANDOM_HPP
