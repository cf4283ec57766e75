#pragma once

#include <cmath>
#include <cstdint>

namespace kwl {

// Counter-based 64-bit generator (SplitMix64 finalizer applied to
// key + counter). Chosen over std engines so that trajectory replays are
// bit-exact from (seed, counter) alone and replica streams can be split
// without coupling: stream i of root seed s is CounterRng(mix(s, i)).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(seed), counter_(0) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  // Uniform in (0,1]; never returns 0 so -log(u) is finite.
  double next_uniform() {
    std::uint64_t u = next_u64() >> 11;  // 53 bits
    return (static_cast<double>(u) + 1.0) * 0x1.0p-53;
  }

  double next_exponential(double rate) { return -std::log(next_uniform()) / rate; }

  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  // Documented replica-seed derivation used by the experiment harness.
  static std::uint64_t derive(std::uint64_t root, std::uint64_t index) {
    return mix(root ^ mix(index + 0x9E3779B97F4A7C15ULL));
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace kwl
