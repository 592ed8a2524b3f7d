#pragma once

#include <cstdint>
#include <random>

namespace nskq {

/// Seedable generator used everywhere randomness appears: mt19937_64 with
/// uniforms built from the top 53 bits, so streams are reproducible across
/// standard libraries (std distributions are implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    double uniform01() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
    std::uint64_t raw() { return g_(); }

  private:
    std::mt19937_64 g_;
};

} // namespace nskq
