#include "recal/rng.hpp"

#include <cmath>
#include <numbers>

namespace recal {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::derive_key(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed + kGolden) ^ mix64(stream * kGolden + 1));
}

std::uint64_t CounterRng::bits_at(std::uint64_t counter) const {
  return mix64(key_ + counter * kGolden);
}

double CounterRng::unit_at(std::uint64_t counter) const {
  return static_cast<double>(bits_at(counter) >> 11) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::next_normal_pair() {
  double u1 = next_unit();
  double u2 = next_unit();
  // Guard log(0); 2^-53 keeps the radius finite.
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace recal
