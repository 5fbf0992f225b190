#ifndef FRAUDBENCH_RNG_HPP
#define FRAUDBENCH_RNG_HPP

#include <cstdint>
#include <random>

namespace fraudbench {

// splitmix64 finalizer; used for seed derivation so that per-trial streams
// are independent of iteration order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(master ^ mix64(stream + 1));
}

// Deterministic RNG wrapper. Uniform doubles are produced directly from the
// top 53 bits of the generator output so results do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint64_t uniform_index(std::uint64_t n) {
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fraudbench

#endif
