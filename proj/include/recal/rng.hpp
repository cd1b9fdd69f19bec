#pragma once

#include <cstdint>
#include <utility>

namespace recal {

// Counter-based pseudo-random generator (splitmix64 finalizer over a keyed
// counter). Draws are pure functions of (key, counter), so replaying a
// counter reproduces the draw exactly on any platform. derive() builds
// statistically independent substreams from a master seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  static CounterRng derive(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng(derive_key(seed, stream));
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t bits_at(std::uint64_t counter) const;
  // Uniform draw in [0, 1) using the 53 high bits.
  double unit_at(std::uint64_t counter) const;

  std::uint64_t next_bits() { return bits_at(counter_++); }
  double next_unit() { return unit_at(counter_++); }
  // One standard-normal pair via Box-Muller; consumes two counter slots.
  std::pair<double, double> next_normal_pair();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace recal
