#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace las {

// splitmix64 step; used to mix seeds for derived streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic stream seed for (master, index, salt). Every independently
// consumable RNG stream in the toolkit is derived through this, so concurrent
// evaluation cannot perturb reproducibility.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t salt) {
  return splitmix64(splitmix64(master ^ splitmix64(salt)) ^ index);
}

namespace seed_salt {
inline constexpr std::uint64_t kInit = 0x01;
inline constexpr std::uint64_t kSelect = 0x02;
inline constexpr std::uint64_t kGenerate = 0x03;
inline constexpr std::uint64_t kInstance = 0x04;
inline constexpr std::uint64_t kLayout = 0x05;
}  // namespace seed_salt

// mt19937_64 with portable distribution mappings. The standard fully pins the
// engine's output sequence; std::uniform_real_distribution and friends are
// implementation-defined, so we map raw words ourselves to keep frozen test
// values stable across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n); n must be > 0. Modulo bias is negligible for the small n used here.
  std::uint64_t uniform_int(std::uint64_t n) { return gen_() % n; }

  // Box-Muller without spare caching: two uniforms per draw, deterministic.
  double normal(double mean, double sd) {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + sd * z;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace las
