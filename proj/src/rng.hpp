#pragma once

// Shared random-stream helpers; internal to the library.

#include <cstddef>
#include <cstdint>
#include <random>

namespace faithlab::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for chunk `chunk` of a run seeded with `seed`.
/// mt19937_64 output is fixed by the standard, so streams are portable.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t chunk) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~chunk)));
}

inline double unit_uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, k) by multiply-shift.
inline std::size_t uniform_below(std::mt19937_64& g, std::size_t k) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(g()) * k) >> 64);
}

}  // namespace faithlab::detail
