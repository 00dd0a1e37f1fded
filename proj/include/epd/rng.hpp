#pragma once
// Deterministic random streams (xoshiro256** seeded through SplitMix64).
//
// Every stream is a pure function of (master seed, instance index, purpose),
// so batch results do not depend on scheduling, thread count, or how many
// draws a sibling stream consumed. No std::random distributions are used:
// their output is implementation-defined, which would break byte-identical
// reports across compilers.

#include <array>
#include <cstdint>

namespace epd {

inline uint64_t splitmix64_next(uint64_t& state) noexcept {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Sub-stream purposes drawn by the instance generator. Keeping scenario 1
// and scenario 2 on separate streams means scenario 2 is unaffected by how
// many values scenario 1 consumed (e.g. per-species vs per-category mode).
enum class Stream : uint64_t {
  Topology = 1,
  Categories = 2,
  Scenario1 = 3,
  Scenario2 = 4,
  Budget = 5,
  Perturb1 = 6,
  Perturb2 = 7,
};

class Rng {
 public:
  explicit Rng(uint64_t seed) noexcept {
    uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64_next(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  // Named sub-stream: hash-chain the three identifiers through SplitMix64.
  static Rng stream(uint64_t master_seed, uint64_t instance_index,
                    Stream purpose) noexcept {
    uint64_t h = master_seed;
    h = splitmix64_next(h) ^ (instance_index * 0x9e3779b97f4a7c15ull);
    h = splitmix64_next(h) ^ static_cast<uint64_t>(purpose);
    return Rng(splitmix64_next(h));
  }

  uint64_t next_u64() noexcept {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0,n); unbiased via rejection of the partial top interval.
  uint64_t next_below(uint64_t n) noexcept {
    const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return x % n;
  }

  // Uniform integer on [lo, hi], both endpoints inclusive.
  int64_t next_int(int64_t lo, int64_t hi) noexcept {
    return lo + static_cast<int64_t>(
                    next_below(static_cast<uint64_t>(hi - lo) + 1));
  }

  // Uniform real on [lo, hi); returns lo for a degenerate interval.
  double next_real(double lo, double hi) noexcept {
    return lo + next_unit() * (hi - lo);
  }

 private:
  static constexpr uint64_t rotl(uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<uint64_t, 4> state_;
};

}  // namespace epd
