#include "drselect/core/seed.hpp"

namespace drselect {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t t : tags) h = splitmix64(h ^ splitmix64(t));
    return h;
}

}  // namespace drselect
