#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace hygampdcs {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives a substream seed from a master seed, a purpose tag and an index.
// Used so that per-trial streams are independent of thread scheduling.
inline std::uint64_t stream_seed(std::uint64_t master, std::string_view purpose,
                                 std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the tag
  for (char c : purpose) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  std::uint64_t s = master;
  std::uint64_t out = splitmix64(s);
  s ^= h;
  out ^= splitmix64(s);
  s ^= index * 0x9e3779b97f4a7c15ull;
  out ^= splitmix64(s);
  return out;
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::string_view purpose,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(stream_seed(master, purpose, index));
}

// CN(0, variance): real and imaginary parts N(0, variance/2).
inline std::complex<double> sample_cn(std::mt19937_64& eng, double variance,
                                      std::normal_distribution<double>& unit) {
  const double s = std::sqrt(variance / 2.0);
  const double re = unit(eng);
  const double im = unit(eng);
  return {s * re, s * im};
}

}  // namespace hygampdcs
