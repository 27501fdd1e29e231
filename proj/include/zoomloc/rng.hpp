#pragma once

// Deterministic, splittable random streams. Every consumer derives its own
// stream seed from a master seed plus integer tags via splitmix64 hashing,
// so trials can run in any order or thread count and still reproduce
// bit-identically. Gaussians come from Box-Muller (no std distributions,
// whose sequences are implementation-defined).

#include <cmath>
#include <complex>
#include <cstdint>

namespace zoomloc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Documented hash split: fold tags into the master seed one splitmix64
// round at a time.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  splitmix64(s);
  s ^= a * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
  splitmix64(s);
  s ^= b * 0xda942042e4dd58b5ULL + 0x9e6c63d0a9de9183ULL;
  splitmix64(s);
  s ^= c * 0xc2b2ae3d27d4eb4fULL + 0x165667b19e3779f9ULL;
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // Box-Muller; u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * kRngPi * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * kRngPi * u2);
  }

  // Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  std::complex<double> cgaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    return {s * gaussian(), s * gaussian()};
  }

  // Unit-modulus complex number with uniform phase.
  std::complex<double> unit_phase() {
    const double a = 2.0 * kRngPi * uniform();
    return {std::cos(a), std::sin(a)};
  }

 private:
  static constexpr double kRngPi = 3.14159265358979323846;
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace zoomloc
