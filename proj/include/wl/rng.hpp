#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace wl {

// SplitMix64 mixing step, used to derive well-separated seeds from a master
// seed and stream coordinates (grid index, replica index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_a,
                                 std::uint64_t stream_b) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (0x517cc1b727220a95ULL * (stream_a + 1)));
  s = splitmix64(s ^ (0x2545f4914f6cdd1dULL * (stream_b + 1)));
  return s;
}

// Seedable generator with hand-rolled variate transforms so that identical
// seeds give identical streams on every platform (std::mt19937_64 output is
// fully specified; the distribution adaptors in <random> are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on the open interval (0, 1); never returns an endpoint, so that
  // std::log of a draw is always finite.
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // One Box-Muller pair of independent standard normals.
  void normal_pair(double& z0, double& z1) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * 3.14159265358979323846 * u2;
    z0 = r * std::cos(t);
    z1 = r * std::sin(t);
  }

  // Geometric on {1, 2, ...} with P(T = k) = (1-p)^{k-1} p, sampled by
  // inverting the survival function P(T > k) = (1-p)^k.
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 1;
    const double t = std::ceil(std::log(uniform01()) / std::log1p(-p));
    return t < 1.0 ? 1 : static_cast<std::uint64_t>(t);
  }

  // Inverse-CDF draw from an explicit 3-entry probability row.
  int pick3(const std::array<double, 3>& row) {
    const double u = uniform01();
    if (u < row[0]) return 0;
    if (u < row[0] + row[1]) return 1;
    return 2;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace wl
