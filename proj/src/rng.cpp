#include "calab/rng.hpp"

namespace calab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = splitmix64(master);
    for (std::uint64_t element : path) state = splitmix64(state ^ splitmix64(element + 0x632be59bd9b4e019ULL));
    return state;
}

std::mt19937_64 make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return std::mt19937_64(derive_seed(master, path));
}

}  // namespace calab
