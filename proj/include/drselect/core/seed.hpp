#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace drselect {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Child seed for a task identified by tags under a master seed. A pure
// function, so results never depend on which worker ran the task.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

// Tags for derive_seed, kept distinct so independent streams never collide.
namespace seed_tag {
inline constexpr std::uint64_t split = 0x5eed0001;
inline constexpr std::uint64_t fit_propensity = 0x5eed0002;
inline constexpr std::uint64_t fit_outcome = 0x5eed0003;
inline constexpr std::uint64_t bootstrap = 0x5eed0004;
inline constexpr std::uint64_t replicate = 0x5eed0005;
inline constexpr std::uint64_t evaluation = 0x5eed0006;
inline constexpr std::uint64_t cv = 0x5eed0007;
inline constexpr std::uint64_t tree = 0x5eed0008;
inline constexpr std::uint64_t ddml = 0x5eed0009;
inline constexpr std::uint64_t synthetic = 0x5eed000a;
}  // namespace seed_tag

}  // namespace drselect
