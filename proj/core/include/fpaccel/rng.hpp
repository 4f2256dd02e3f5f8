#pragma once

#include <cmath>
#include <cstdint>

namespace fpaccel {

// SplitMix64 stream with Box-Muller normal draws. The update rule, mixing
// constants, uniform mapping and normal ordering are all fixed so that a
// seed reproduces the same stream on any platform (and in any language that
// reimplements this generator).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1): top 53 bits, an exact zero is bumped to 2^-53.
  double next_double() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  // Standard normal via Box-Muller. Draws come in pairs (cosine branch
  // first); the sine branch is cached for the next call.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * kPi * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

private:
  static constexpr double kPi = 3.14159265358979323846;
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Independent stream seed for (base seed, stream index) pairs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  return g.next_u64();
}

}  // namespace fpaccel
