#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace eals {

// Seeded Gaussian stream. Box-Muller on top of mt19937_64 instead of
// std::normal_distribution so the stream is identical across standard
// libraries; checkpoints produced with the same seed must be byte-identical.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed, double stddev = 1.0)
      : engine_(seed), stddev_(stddev) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_ * stddev_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle) * stddev_;
  }

 private:
  // Uniform in (0, 1]; never 0 so log() stays finite.
  double uniform01() {
    const std::uint64_t bits = engine_() >> 11;  // top 53 bits
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double stddev_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace eals
