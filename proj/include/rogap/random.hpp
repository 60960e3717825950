#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace rogap {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based seed split: the seed of stream `index` under `master` is the
/// (index+1)-th output of a SplitMix64 sequence started at `master`. Pure in
/// (master, index), so trial order and worker count never matter.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64_mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// The engine sequence of mt19937_64 is fixed by the standard; distributions
/// are not, so the conversions below are written out.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(uniform_below(rng, span));
}

/// Fisher-Yates shuffle with the portable bounded draw.
template <class T>
void shuffle_portable(std::vector<T>& v, Rng& rng) {
  for (std::size_t k = v.size(); k > 1; --k) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, k));
    std::swap(v[k - 1], v[j]);
  }
}

/// FNV-1a over 64-bit words, rendered as 16 hex digits.
template <class Range>
std::string digest_hex(const Range& words) {
  std::uint64_t h = 14695981039346656037ULL;
  for (auto w : words) {
    auto x = static_cast<std::uint64_t>(w);
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xFFU;
      h *= 1099511628211ULL;
    }
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = kHex[h & 0xFU];
    h >>= 4;
  }
  return out;
}

inline std::string digest_bytes(const std::string& bytes) {
  std::vector<std::uint8_t> v(bytes.begin(), bytes.end());
  return digest_hex(v);
}

}  // namespace rogap
