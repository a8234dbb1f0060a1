#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kpo {

using Rng = std::mt19937_64;

// Top-level substream tags. Every random draw in the library comes from a
// generator seeded by derive_seed(master, {tag, indices...}), so graph
// construction, initial conditions and noise never share a stream and the
// result of a task does not depend on which worker ran it.
enum class Stream : std::uint64_t {
  kGraph = 1,
  kInitial = 2,
  kNoise = 3,
};

std::uint64_t splitmix64(std::uint64_t x);

// s_0 = splitmix64(master); s_{i+1} = splitmix64(s_i ^ splitmix64(path_i + 1)).
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path);

inline std::uint64_t tag(Stream s) { return static_cast<std::uint64_t>(s); }

Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace kpo
