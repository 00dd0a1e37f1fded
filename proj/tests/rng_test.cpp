#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "epd/rng.hpp"

using namespace epd;

TEST_CASE("same seed yields the same sequence") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds yield different sequences") {
  Rng a(1), b(2);
  bool any_diff = false;
  for (int i = 0; i < 16; ++i) any_diff |= (a.next_u64() != b.next_u64());
  CHECK(any_diff);
}

TEST_CASE("stream is a pure function of its identifiers") {
  Rng a = Rng::stream(42, 7, Stream::Scenario1);
  Rng b = Rng::stream(42, 7, Stream::Scenario1);
  for (int i = 0; i < 32; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("streams with different purposes are decoupled") {
  Rng a = Rng::stream(42, 7, Stream::Scenario1);
  Rng b = Rng::stream(42, 7, Stream::Scenario2);
  Rng c = Rng::stream(42, 8, Stream::Scenario1);
  bool ab = false, ac = false;
  for (int i = 0; i < 16; ++i) {
    uint64_t x = a.next_u64();
    ab |= (x != b.next_u64());
    ac |= (x != c.next_u64());
  }
  CHECK(ab);
  CHECK(ac);
}

TEST_CASE("next_unit stays inside [0,1)") {
  Rng rng(99);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);  // both tails are actually reached
  CHECK(hi > 0.99);
}

TEST_CASE("next_below is bounded and roughly uniform") {
  Rng rng(7);
  std::vector<int> counts(6, 0);
  const int draws = 120000;
  for (int i = 0; i < draws; ++i) {
    uint64_t x = rng.next_below(6);
    REQUIRE(x < 6);
    ++counts[static_cast<size_t>(x)];
  }
  for (int c : counts) {
    CHECK(c > draws / 6 - draws / 50);
    CHECK(c < draws / 6 + draws / 50);
  }
}

TEST_CASE("next_int covers both inclusive endpoints and nothing else") {
  Rng rng(3);
  std::set<int64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    int64_t v = rng.next_int(2, 4);
    REQUIRE(v >= 2);
    REQUIRE(v <= 4);
    seen.insert(v);
  }
  CHECK(seen == std::set<int64_t>{2, 3, 4});
  CHECK(rng.next_int(5, 5) == 5);
}

TEST_CASE("next_real respects its interval") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    double v = rng.next_real(0.2, 0.5);
    CHECK(v >= 0.2);
    CHECK(v < 0.5);
  }
  CHECK(rng.next_real(0.3, 0.3) == 0.3);
}

TEST_CASE("next_real mean matches the interval midpoint") {
  Rng rng(2026);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) sum += rng.next_real(0.10, 0.20);
  CHECK(std::fabs(sum / draws - 0.15) < 0.001);
}
