// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cellfree {

// Substream lanes within one Monte Carlo drop. Each (master seed, drop,
// lane) triple maps to an independent generator, so drops can run in any
// order or in parallel and still reproduce bit-identical results.
enum class RngLane : std::uint64_t {
  kGeometry = 0,  // AP positions, user positions, shadowing (in that order)
  kChannel = 1,   // small-scale tap gains
  kPilot = 2,     // pilot symbol phases
  kNoise = 3,     // additive noise
  kData = 4,      // payload symbols
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. Gaussian variates are produced by an
// explicit Box-Muller transform (not std::normal_distribution) so output
// does not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; generates pairs, caches the second.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Circularly-symmetric complex Gaussian CN(0, variance).
  std::complex<double> cnormal(double variance) {
    double s = std::sqrt(variance * 0.5);
    double re = normal();
    double im = normal();
    return {s * re, s * im};
  }

  // Unit-modulus symbol with uniformly random phase.
  std::complex<double> random_phase() {
    double a = 6.283185307179586476925286766559 * uniform();
    return {std::cos(a), std::sin(a)};
  }

  // Unit-power QPSK symbol.
  std::complex<double> qpsk() {
    static const double kInvSqrt2 = 0.70710678118654752440;
    std::uint64_t b = next_u64();
    return {(b & 1) ? kInvSqrt2 : -kInvSqrt2, (b & 2) ? kInvSqrt2 : -kInvSqrt2};
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Counter-based substream derivation: the seed for (drop, lane) is obtained
// by mixing the master seed with the drop index and lane tag through
// splitmix64. Streams are independent of the order drops execute in.
inline Rng substream(std::uint64_t master_seed, std::uint64_t drop, RngLane lane) {
  std::uint64_t s = master_seed;
  (void)splitmix64(s);
  s ^= splitmix64(s) + 0x9E3779B97F4A7C15ULL * (drop + 1);
  s ^= splitmix64(s) + 0xC2B2AE3D27D4EB4FULL * (static_cast<std::uint64_t>(lane) + 1);
  return Rng(splitmix64(s));
}

}  // namespace cellfree
