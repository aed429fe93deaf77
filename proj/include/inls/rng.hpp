#pragma once

#include <cstdint>
#include <random>

namespace inls {

// mt19937_64 output is fixed by the standard; the distributions are not,
// so uniforms are mapped by hand to keep runs identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // integer in [lo, hi]
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 g_;
};

}  // namespace inls
