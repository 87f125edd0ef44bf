#pragma once

#include <cstdint>

namespace bfl {

// splitmix64: same sequence on every platform, unlike std distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, n); n >= 1.
  uint64_t below(uint64_t n) {
    uint64_t reject = (0 - n) % n;
    for (;;) {
      uint64_t x = next();
      if (x >= reject) return x % n;
    }
  }

  // Uniform over {1, ..., n}.
  uint64_t one_to(uint64_t n) { return 1 + below(n); }

 private:
  uint64_t state_;
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  Rng r(a ^ (b * 0xD1B54A32D192ED03ull + 0x9E3779B97F4A7C15ull));
  return r.next();
}

}  // namespace bfl
