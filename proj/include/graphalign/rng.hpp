#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace graphalign {

// splitmix64 finalizer (Steele, Lea & Flood; same constants as java.util.SplittableRandom).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Substream key: master seed plus purpose/trial tags, chained through splitmix64.
// Distinct tag lists give independent-looking keys; the map tag -> tag * PHI is
// injective mod 2^64 because PHI is odd.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t t : tags) h = splitmix64(h ^ (t * 0x9e3779b97f4a7c15ULL));
  return h;
}

// Deterministic random stream. mt19937_64 has a standard-mandated output
// sequence, uniforms take the top 53 bits, and normals come from Box-Muller,
// so a given seed reproduces the same values everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0,1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // unbiased uniform integer on [0, bound), bound >= 1 (rejection sampling)
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // standard normal via Box-Muller; the paired variate is cached
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = next_unit();                                              // [0,1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace graphalign
