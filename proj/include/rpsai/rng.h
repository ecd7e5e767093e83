#ifndef RPSAI_RNG_H_
#define RPSAI_RNG_H_

#include <cstdint>
#include <random>

namespace rpsai {

// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream tags. Member streams use the member order itself (1..16), so these
// live well outside that range.
inline constexpr std::uint64_t kAgentStreamTag = 0xA6E17ULL << 32;
inline constexpr std::uint64_t kReplicationStreamTag = 0x4E911CULL << 32;

// Stable seed for the sub-stream `tag` of `seed`. Changing one tag never
// perturbs another stream.
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t tag) {
  return Mix64(Mix64(seed) ^ Mix64(tag + 0x632be59bd9b4e019ULL));
}

// Seeded random source. The engine is std::mt19937_64 (bit-exact by the
// standard); sampling is done here rather than through <random>
// distributions, whose output is implementation-defined, so that session
// logs reproduce across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  // n == 1 consumes nothing.
  std::uint64_t UniformIndex(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace rpsai

#endif  // RPSAI_RNG_H_
