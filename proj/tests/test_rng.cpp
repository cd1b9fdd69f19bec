#include <doctest.h>

#include <cmath>
#include <set>

#include "recal/rng.hpp"

using recal::CounterRng;

TEST_CASE("draws are pure functions of key and counter") {
  CounterRng a(0xDEADBEEFu);
  CounterRng b(0xDEADBEEFu);
  for (int i = 0; i < 100; ++i) CHECK(a.next_bits() == b.next_bits());
  CHECK(a.unit_at(5) == a.unit_at(5));
  CHECK(a.bits_at(7) == b.bits_at(7));
}

TEST_CASE("unit draws live in [0,1)") {
  CounterRng rng(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("derived streams differ from each other and the parent") {
  const std::uint64_t k0 = CounterRng::derive_key(42, 0);
  const std::uint64_t k1 = CounterRng::derive_key(42, 1);
  const std::uint64_t other_seed = CounterRng::derive_key(43, 0);
  CHECK(k0 != k1);
  CHECK(k0 != other_seed);
  std::set<std::uint64_t> keys;
  for (int s = 0; s < 1000; ++s) keys.insert(CounterRng::derive_key(7, s));
  CHECK(keys.size() == 1000);
}

TEST_CASE("normal pairs are finite and roughly standard") {
  CounterRng rng(9);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n / 2; ++i) {
    const auto [a, b] = rng.next_normal_pair();
    CHECK(std::isfinite(a));
    CHECK(std::isfinite(b));
    sum += a + b;
    sum_sq += a * a + b * b;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.05);
}

TEST_CASE("mean of unit draws concentrates around one half") {
  CounterRng rng(CounterRng::derive_key(2024, 3));
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += rng.next_unit();
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}
