#pragma once

#include <cstdint>
#include <string_view>

#include "core.hpp"

namespace lypqc {

/// Counter-based SplitMix64 stream.
///
/// The i-th raw value of stream (seed) is mix64(seed + (i + 1) * 0x9E3779B97F4A7C15), where
/// mix64 is the SplitMix64 finalizer. Doubles take the top 53 bits. Because every draw is a
/// pure function of (seed, counter), a stream can be re-created at any offset and extended
/// without disturbing earlier values.
class CounterRng {
 public:
  static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// FNV-1a; used to derive per-check substreams from names.
  static constexpr std::uint64_t hash(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

  constexpr explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  /// Independent stream keyed by a label.
  constexpr CounterRng substream(std::string_view label) const {
    return CounterRng(mix64(seed_ ^ hash(label)));
  }

  constexpr std::uint64_t at(std::uint64_t i) const { return mix64(seed_ + (i + 1) * golden); }

  constexpr std::uint64_t next_u64() { return at(counter_++); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in the open unit disk.
  Complex in_disk(double radius = 1.0) {
    double r = radius * std::sqrt(uniform());
    double t = uniform(0.0, 2 * pi);
    return std::polar(r, t);
  }

  constexpr std::uint64_t seed() const { return seed_; }
  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace lypqc
