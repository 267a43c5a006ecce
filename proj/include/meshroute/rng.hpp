#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace meshroute {

/// Engine used by every stochastic component. Streams are never shared
/// between runs; derive a fresh one with derive_seed().
using rng_t = std::mt19937_64;

/// SplitMix64 finalizer, used to decorrelate derived seeds.
constexpr std::uint64_t mix_seed(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Independent stream seed for (master, index).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return mix_seed(mix_seed(master) ^ (index * 0xd1b54a32d192ed03ULL));
}

inline double uniform01(rng_t& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform(rng_t& rng, double lo, double hi)
{
    if (lo == hi) {
        return lo;
    }
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(rng_t& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Fisher-Yates over uniform_index, so the order depends only on the engine.
template <typename T>
void shuffle_in_place(std::vector<T>& items, rng_t& rng)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    }
}

} // namespace meshroute
