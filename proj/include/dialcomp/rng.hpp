#pragma once

#include <cstdint>
#include <string_view>

namespace dialcomp {

// Deterministic 64-bit generator (splitmix64). The standard engines are
// portable but the standard distributions are not; all sampling in the
// pipeline goes through this type so compiled corpora are byte-stable
// across platforms and worker counts.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed), seed_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  uint64_t below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1).
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() & 1) != 0; }

  uint64_t seed_value() const { return seed_; }

 private:
  uint64_t state_;
  uint64_t seed_;
};

inline uint64_t fnv1a64(std::string_view text) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Stable per-entity seed derivation: hash(master_seed, tag). Used for
// per-task and per-instance generators so output is independent of
// scheduling order.
inline uint64_t derive_seed(uint64_t master, std::string_view tag) {
  uint64_t z = master ^ fnv1a64(tag);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace dialcomp
