#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "col/errors.hpp"
#include "col/types.hpp"

namespace col {

// Seeded random stream with pinned sampling algorithms, so that seeded runs are
// reproducible independently of the standard library's distribution internals.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller, no cached second value.
  double gaussian() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double exponential() {
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    return -std::log(u);
  }

  // Uniform integer in [0, n); rejection sampling avoids modulo bias.
  int uniform_int(int n) {
    if (n <= 0) throw DomainError("uniform_int: n must be positive");
    const uint64_t span = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return static_cast<int>(r % span);
  }

  // Index drawn from a probability vector (rows are assumed normalized).
  int categorical(const Eigen::Ref<const Vec>& probs) {
    const double u = uniform01();
    double cum = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return i;
    }
    return static_cast<int>(probs.size()) - 1;  // rounding in the tail
  }

  Vec gaussian_vector(int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian();
    return v;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
};

}  // namespace col
