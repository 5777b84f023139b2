#pragma once

#include <cstdint>

namespace dws {

/// Counter-based generator: draw number i of stream `seed` is
/// splitmix64_mix(seed + (i + 1) * 0x9E3779B97F4A7C15). Any draw can be
/// recomputed from (seed, i) alone, so streams are reproducible from the
/// description below in any language.
///
/// Algorithm identifier: "splitmix64-ctr/box-muller".
///   uniform01()  = ((draw >> 11) + 1) * 2^-53, in (0, 1]
///   gaussian()   = Box-Muller on two consecutive uniforms u1, u2:
///                  sqrt(-2 ln u1) * cos(2 pi u2), then sqrt(-2 ln u1) * sin(2 pi u2)
///                  for the next call.
class CounterRng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-ctr/box-muller";

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z);
  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter);

  std::uint64_t next();
  double uniform01();
  double gaussian();
  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dws
