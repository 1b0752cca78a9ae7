#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace mglab {

/// Counter-based generator built on the SplitMix64 finalizer (Steele, Lea &
/// Flood 2014). Draw k of a stream is mix(key + (k + 1) * golden), so any
/// entry of a random matrix can be produced independently of the others.
/// The constants below are pinned; changing them changes every experiment.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Stream key for (seed, purpose). The purpose tag keeps w_in and w_r
  /// draws independent of each other.
  static constexpr std::uint64_t stream_key(std::uint64_t seed, std::string_view purpose) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a over the tag
    for (char c : purpose) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return mix(mix(seed) ^ h);
  }

  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
  constexpr CounterRng(std::uint64_t seed, std::string_view purpose) noexcept
      : key_(stream_key(seed, purpose)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + (counter + 1) * kGolden);
  }

  // 52 random bits plus one half keeps every intermediate exactly
  // representable, so the open-interval bounds hold after rounding.

  /// Uniform on the open interval (0, 1).
  constexpr double unit(std::uint64_t counter) const noexcept {
    return (static_cast<double>(bits(counter) >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform on the open interval (-bound, bound).
  constexpr double symmetric(std::uint64_t counter, double bound) const noexcept {
    return bound * ((static_cast<double>(bits(counter) >> 12) + 0.5) * 0x1.0p-51 - 1.0);
  }

  /// Standard normal via Box-Muller; consumes counters 2k and 2k+1.
  double normal(std::uint64_t counter) const noexcept {
    const double u1 = unit(2 * counter);
    const double u2 = unit(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace mglab
