#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace calab {

/// Seeding map: a stream is identified by (master seed, path of integers). The
/// path is folded through splitmix64 into a 64-bit seed for std::mt19937_64.
/// Normal variates come from std::normal_distribution (libstdc++: Marsaglia
/// polar), so bit-exact reproduction assumes the same standard library.
inline constexpr std::string_view rng_algorithm_id =
    "mt19937_64;seed=splitmix64-fold(master,path...);normal=std::normal_distribution";

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

std::mt19937_64 make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Stream domains, so the same (seed, trial) pair used for different purposes
/// never shares a stream.
namespace stream_domain {
inline constexpr std::uint64_t noise = 0x6e6f697365ULL;
inline constexpr std::uint64_t frequencies = 0x66726571ULL;
inline constexpr std::uint64_t baseline_pair = 0x70616972ULL;
inline constexpr std::uint64_t bootstrap = 0x626f6f74ULL;
inline constexpr std::uint64_t scaling_point = 0x7363616cULL;
}  // namespace stream_domain

}  // namespace calab
