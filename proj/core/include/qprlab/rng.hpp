#pragma once

#include <cmath>
#include <cstdint>

namespace qprlab {

// Counter-based deterministic RNG. Every sampler in the library derives its
// randomness from (root seed, stream id, draw index) so that draws are
// reproducible across runs and independent of evaluation order. The stdlib
// distributions are avoided on purpose: their output is implementation
// defined, which would break the bit-for-bit replay contract.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream_id,
                                 std::uint64_t draw_index) {
  std::uint64_t s = root;
  std::uint64_t a = splitmix64(s);
  s ^= stream_id * 0xd1342543de82ef95ULL;
  std::uint64_t b = splitmix64(s);
  s ^= draw_index * 0xa0761d6478bd642fULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b << 1) ^ c;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  Rng(std::uint64_t root, std::uint64_t stream_id, std::uint64_t draw_index)
      : state_(derive_seed(root, stream_id, draw_index)) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  // Uniform in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qprlab
