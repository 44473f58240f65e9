#pragma once

#include <cmath>
#include <cstdint>

namespace flexprice {

// Counter-based generator "splitmix64-boxmuller v1" (see docs/formats.md).
// Draw i is a pure function of (seed, stream, i), so paths replay exactly
// regardless of call history or standard-library internals.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  // Uniform in [0,1) with 53 random mantissa bits.
  [[nodiscard]] double uniform() noexcept {
    return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  [[nodiscard]] double normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // in (0,1], keeps log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  void reset() noexcept {
    counter_ = 0;
    have_spare_ = false;
  }

 private:
  [[nodiscard]] std::uint64_t next_raw() noexcept {
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (counter_++ + 1) +
                      0xD1B54A32D192ED03ULL * stream_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace flexprice
