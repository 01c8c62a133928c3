#pragma once

#include "censreg/distributions.hpp"

#include <cstdint>
#include <random>

namespace censreg {

// Deterministic RNG wrapper. Draws use inverse-CDF transforms of explicit
// 53-bit uniforms, so sequences are bit-identical across platforms and do not
// depend on standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent replication stream derived from (seed, index) via SplitMix64.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return Rng(z ^ (z >> 31));
  }

  double uniform01() {  // open interval (0, 1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(double mean, double sd) { return mean + sd * normal_quantile(uniform01()); }

  int bernoulli(double p) { return uniform01() < p ? 1 : 0; }

  // Event time from the hazard model h(z|x) = scale_multiplier * lambda * gamma * z^(gamma-1),
  // by inverting the survival function: Z = (-log U / lambda*)^(1/gamma).
  double weibull_ph(const WeibullPH& p, double scale_multiplier = 1.0) {
    const double u = uniform01();
    return std::pow(-std::log(u) / (p.lambda * scale_multiplier), 1.0 / p.gamma);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace censreg
