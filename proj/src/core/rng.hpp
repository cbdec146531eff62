#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace mtlab {

// Deterministic, stream-splittable generator (xoshiro256++ seeded through
// splitmix64).  The (seed, stream) pair fully determines the sequence, so
// sample budgets can be partitioned across workers without changing the
// result.  We do not use <random> distributions: their sequences are
// implementation-defined and would break bit-reproducibility across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto &word : state_) word = splitmix64(x);
    // avoid the all-zero state
    if (!(state_[0] | state_[1] | state_[2] | state_[3])) state_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform on [0,1) with 53 random bits
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // standard normal, Box-Muller with a cached spare
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // uniform direction on S^{n-1}
  void unit_vector(std::span<double> out) {
    double norm2;
    do {
      norm2 = 0.0;
      for (auto &c : out) {
        c = normal();
        norm2 += c * c;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto &c : out) c *= inv;
  }

  // uniform point in the unit ball of dimension out.size()
  void ball_point(std::span<double> out) {
    unit_vector(out);
    const double r = std::pow(u01(), 1.0 / static_cast<double>(out.size()));
    for (auto &c : out) c *= r;
  }

 private:
  static std::uint64_t rotl(std::uint64_t w, int k) {
    return (w << k) | (w >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t &x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mtlab
